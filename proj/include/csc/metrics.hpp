#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "csc/conv_operator.hpp"

namespace csc {

// Sorted set of active coefficient indices together with the model shape.
struct SupportSet {
    std::vector<int> indices;
    int n = 1;
    int m = 1;
    int N = 1;

    SupportSet() = default;
    SupportSet(std::vector<int> idx, int n_, int m_, int N_);
    int size() const { return static_cast<int>(indices.size()); }
    bool contains(int i) const;
};

SupportSet support_set(const ConvOperator& op, const Eigen::VectorXd& code, double tol = 1e-10);

// Number of entries with magnitude above tol.
int l0_norm(const Eigen::VectorXd& v, double tol = 1e-10);

// Largest number of active entries seen by any stripe: the maximum over all
// shift positions of the count inside the window of 2n-1 consecutive
// coefficient blocks. This is the sparsity measure all guarantees use.
int l0_inf_norm(const Eigen::VectorXd& code, int n, int m, double tol = 1e-10);
int l0_inf_norm(const ConvOperator& op, const Eigen::VectorXd& code, double tol = 1e-10);
int support_l0_inf(const SupportSet& s);

// Largest patch norm of the noise: the noise level every local guarantee is
// stated against. Constant vectors give |c|*sqrt(n).
double local_noise_level(const ConvOperator& op, const Eigen::VectorXd& noise);

// Coherence bound on the stripe restricted-isometry constant: (k-1)*mu.
double srip_bound(double mu, int k);

// Eigenvalue enclosure for the Gram of any support with stripe sparsity k:
// [1-(k-1)mu, 1+(k-1)mu].
std::pair<double, double> gram_eigen_bounds(double mu, int k);

// Worst-case squared distance between any two feasible codes of stripe
// sparsity k explaining the same signal up to noise eps. Present only when
// k < (1 + 1/mu)/2.
std::optional<double> stability_bound_p0inf(double eps, double mu, int k);
// Sharper form when the exact restricted-isometry constant of order 2k is
// available; requires delta2k < 1.
std::optional<double> stability_bound_p0inf_srip(double eps, double delta2k);

// Greedy pursuit recovery condition: k < (1 + 1/mu)/2 - (eps_local/gamma_min)/mu.
bool omp_hypothesis(double mu, int k, double eps_local, double gamma_min);
// Same condition rearranged as a threshold on eps_local/gamma_min; recovery is
// guaranteed strictly below this line.
double omp_phase_line(double mu, int k);

// Squared-error guarantee for greedy pursuit with the correct support:
// eps^2 / (1 - mu*(k-1)), present while mu*(k-1) < 1.
std::optional<double> omp_error_bound(double eps, double mu, int k);

// Exact recovery condition is met whenever k < (1 + 1/mu)/2.
bool erc_coherence_condition(double mu, int k);
// Coherence bound on the off-support l1 projection: k*mu/(1-(k-1)*mu).
std::optional<double> erc_l1_bound(double mu, int k);

// Convex relaxation recovery condition: k < (1 + 1/mu)/3.
bool bp_hypothesis(double mu, int k);
// Sup-norm error guarantee of the relaxation at penalty 4*eps_local.
double bp_linf_bound(double eps_local);

}  // namespace csc
