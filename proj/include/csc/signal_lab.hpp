#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "csc/conv_operator.hpp"
#include "csc/sparse_code.hpp"

namespace csc {

// Value law of the planted coefficients.
//  - uniform(a): each value uniform on [-a, a]
//  - band(lo, hi): magnitude uniform on [lo, hi], fair random sign
struct AmplitudeLaw {
    enum class Kind { Uniform, Band };
    Kind kind = Kind::Band;
    double scale = 1.0;
    double lo = 1.0, hi = 2.0;

    static AmplitudeLaw uniform(double a);
    static AmplitudeLaw band(double lo, double hi);
};

// Contamination of the clean signal.
//  - none(): exact noiseless instance
//  - global_norm(e): Gaussian direction rescaled to l2 norm exactly e
//  - gaussian(s): i.i.d. entries of standard deviation s
struct NoiseLaw {
    enum class Kind { None, GlobalNorm, GaussianSigma };
    Kind kind = Kind::None;
    double value = 0.0;

    static NoiseLaw none() { return NoiseLaw{}; }
    static NoiseLaw global_norm(double eps);
    static NoiseLaw gaussian(double sigma);
};

// Recipe for one synthetic instance.  Identical spec and operator give
// bitwise identical output on every platform; the draw order is frozen:
//   1. cardinality (one integer draw, only when lo < hi)
//   2. support positions, a partial Fisher-Yates pass over all N*m slots,
//      then sorted ascending
//   3. one value per support slot in ascending index order (a Band draw
//      consumes magnitude first, then sign; sign is negative when the
//      uniform is below one half)
//   4. noise samples in index order
struct SignalSpec {
    std::uint64_t seed = 0;
    int cardinality_lo = 1, cardinality_hi = 1;  // inclusive
    AmplitudeLaw amplitude;
    NoiseLaw noise;

    void validate(const ConvOperator& op) const;  // throws SpecInvalidError
};

struct SignalInstance {
    SparseCode code;           // planted coefficients
    Eigen::VectorXd clean;     // dictionary times code
    Eigen::VectorXd noise;
    Eigen::VectorXd signal;    // clean + noise
    int cardinality = 0;
    int l0 = 0;
    int l0_inf = 0;
    double eps_global = 0.0;   // measured l2 norm of the noise
    double eps_local = 0.0;    // largest patch norm of the noise
    std::optional<double> gamma_min_abs;  // absent for the empty code
};

SignalInstance generate_instance(const ConvOperator& op, const SignalSpec& spec);

// First m columns of the orthonormal type-II cosine basis in dimension n.
// The local Gram is the identity to machine precision.
LocalDictionary dct_local_dictionary(int n, int m);

// Search parameters of the low-coherence filter design below.
struct DictionaryDesignConfig {
    int n = 64;
    int m = 1;
    double coherence_lo = 0.085;
    double coherence_hi = 0.095;
    double initial_step = 0.05;  // normalized-gradient step length
    int max_rounds = 5000;       // descent steps per attempt
    int max_attempts = 32;       // fresh starts before giving up

    void validate() const;
};

// Local dictionary whose convolutional coherence lands inside the requested
// band.  Plain random filters concentrate far above such bands, so the design
// starts from a seeded Gaussian draw and descends a penalty on every
// overlapping-pair correlation that exceeds the band midpoint, renormalizing
// after each step, until the coherence enters the band.  Overshoots trigger a
// backtrack with a halved step; exhausted attempts restart from the next
// substream.  Deterministic in the seed.
LocalDictionary low_coherence_dictionary(std::uint64_t seed,
                                         const DictionaryDesignConfig& config);

}  // namespace csc
