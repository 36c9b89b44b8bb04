#pragma once

#include <vector>

namespace mulab {

/// Divided difference [x_0, ..., x_m] exp of the exponential. Nodes may repeat (confluent case).
///
/// Clusters with spread at most one are evaluated by the centred series
/// e^c * sum_k h_k(x - c) / (k + m)!, where h_k is the complete homogeneous symmetric polynomial;
/// wider ranges use the recurrence on sorted nodes. Throws NonFiniteInput or OverflowRisk (node > 700).
double divided_difference_exp(std::vector<double> nodes);

}  // namespace mulab
