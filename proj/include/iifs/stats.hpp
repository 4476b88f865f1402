#pragma once

#include <Eigen/Dense>
#include <vector>

namespace iifs {

// Base-2 Jensen-Shannon divergence between two probability vectors.
// Symmetric, bounded to [0, 1]. Inputs must have equal length, nonnegative
// entries, and sum to 1 within 1e-9.
double jensen_shannon(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Average-tie ranks of v, starting at 0 for the smallest value.
std::vector<double> tied_ranks(const std::vector<double>& v);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Spearman rho with average-tie ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace iifs
