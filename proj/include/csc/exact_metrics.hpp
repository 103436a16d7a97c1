#pragma once

#include <Eigen/Dense>
#include <functional>

#include "csc/conv_operator.hpp"
#include "csc/metrics.hpp"

namespace csc {

// Visits every non-empty support whose stripe sparsity is at most k, by
// backtracking over coefficient indices with window pruning. The visitor
// receives the indices (ascending) and the attained maximum stripe count.
// Returns the number of supports visited; throws TooLargeError once the count
// would exceed max_candidates.
long long enumerate_supports(int n, int m, int N, int k, long long max_candidates,
                             const std::function<void(const std::vector<int>&, int)>& visit);

// Exact stripe restricted-isometry constant of order k: the largest deviation
// of a restricted Gram eigenvalue from 1, over every support whose stripe
// sparsity equals k. Enumeration is guarded by max_candidates.
double srip_exact(const ConvOperator& op, int k, long long max_candidates = 10'000'000);

// Exact recovery constant of a support: 1 minus the largest l1 norm of the
// restricted pseudoinverse applied to an off-support atom. Only atoms
// overlapping the support are scanned; disjoint ones contribute exactly zero.
// The condition is met when the returned value is positive.
double erc_constant(const ConvOperator& op, const SupportSet& support);

// Restricted Gram matrix of a support, assembled from pairwise atom inner
// products (entries of disjoint atoms are exactly zero).
Eigen::MatrixXd restricted_gram(const ConvOperator& op, const std::vector<int>& indices);

}  // namespace csc
