#pragma once

#include <Eigen/Core>

#include <vector>

namespace semloop {

// Minimum-cost assignment (Hungarian algorithm, O(n^2 m) with potentials).
// Returns, per row, the assigned column, or -1 when there are more rows
// than columns and the row stays unmatched. Every finite cost is allowed;
// all rows (or all columns, whichever side is smaller) get assigned.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

// Total cost of an assignment as produced by min_cost_assignment.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_to_col);

}  // namespace semloop
