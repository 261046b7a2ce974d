#pragma once

namespace affectsim {
class WeightedGraph;
}
