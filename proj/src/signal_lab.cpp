#include "csc/signal_lab.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "csc/errors.hpp"
#include "csc/metrics.hpp"
#include "csc/rng.hpp"

namespace csc {

AmplitudeLaw AmplitudeLaw::uniform(double a) {
    if (!(a > 0.0)) throw SpecInvalidError("amplitude half-width must be positive");
    AmplitudeLaw law;
    law.kind = Kind::Uniform;
    law.scale = a;
    return law;
}

AmplitudeLaw AmplitudeLaw::band(double lo, double hi) {
    if (!(lo > 0.0) || !(hi >= lo))
        throw SpecInvalidError("amplitude band needs 0 < lo <= hi");
    AmplitudeLaw law;
    law.kind = Kind::Band;
    law.lo = lo;
    law.hi = hi;
    return law;
}

NoiseLaw NoiseLaw::global_norm(double eps) {
    if (!(eps > 0.0)) throw SpecInvalidError("noise norm must be positive");
    NoiseLaw law;
    law.kind = Kind::GlobalNorm;
    law.value = eps;
    return law;
}

NoiseLaw NoiseLaw::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw SpecInvalidError("noise deviation must be positive");
    NoiseLaw law;
    law.kind = Kind::GaussianSigma;
    law.value = sigma;
    return law;
}

void SignalSpec::validate(const ConvOperator& op) const {
    if (cardinality_lo < 0 || cardinality_hi < cardinality_lo)
        throw SpecInvalidError("cardinality range must satisfy 0 <= lo <= hi");
    if (cardinality_hi > op.atom_count())
        throw SpecInvalidError("cardinality exceeds the number of atoms");
}

SignalInstance generate_instance(const ConvOperator& op, const SignalSpec& spec) {
    spec.validate(op);
    CounterRng rng(spec.seed);
    const int total = op.atom_count();

    int k = spec.cardinality_lo;
    if (spec.cardinality_hi > spec.cardinality_lo)
        k = spec.cardinality_lo +
            static_cast<int>(rng.uniform_int(
                static_cast<std::uint64_t>(spec.cardinality_hi - spec.cardinality_lo) + 1));

    // Support: the first k entries of a partially shuffled slot list.
    std::vector<int> slots(total);
    std::iota(slots.begin(), slots.end(), 0);
    for (int t = 0; t < k; ++t) {
        const int j = t + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(total - t)));
        std::swap(slots[t], slots[j]);
    }
    std::vector<int> support(slots.begin(), slots.begin() + k);
    std::sort(support.begin(), support.end());

    SignalInstance out;
    Eigen::VectorXd values = Eigen::VectorXd::Zero(total);
    double min_abs = 0.0;
    for (int t = 0; t < k; ++t) {
        double v = 0.0;
        if (spec.amplitude.kind == AmplitudeLaw::Kind::Uniform) {
            v = spec.amplitude.scale * (2.0 * rng.uniform01() - 1.0);
        } else {
            const double mag =
                spec.amplitude.lo + (spec.amplitude.hi - spec.amplitude.lo) * rng.uniform01();
            v = rng.uniform01() < 0.5 ? -mag : mag;
        }
        values[support[t]] = v;
        if (t == 0 || std::abs(v) < min_abs) min_abs = std::abs(v);
    }
    out.code = SparseCode{std::move(values), op.m()};
    out.clean = op.apply(out.code);

    out.noise = Eigen::VectorXd::Zero(op.N());
    if (spec.noise.kind != NoiseLaw::Kind::None) {
        for (int i = 0; i < op.N(); ++i) out.noise[i] = rng.gaussian();
        if (spec.noise.kind == NoiseLaw::Kind::GlobalNorm) {
            const double norm = out.noise.norm();
            if (norm > 0.0) out.noise *= spec.noise.value / norm;
        } else {
            out.noise *= spec.noise.value;
        }
    }
    out.signal = out.clean + out.noise;

    out.cardinality = k;
    out.l0 = l0_norm(out.code.values, 0.0);
    out.l0_inf = l0_inf_norm(op, out.code.values, 0.0);
    out.eps_global = out.noise.norm();
    out.eps_local = local_noise_level(op, out.noise);
    if (k > 0) out.gamma_min_abs = min_abs;
    return out;
}

LocalDictionary dct_local_dictionary(int n, int m) {
    if (n < 1 || m < 1 || m > n)
        throw SpecInvalidError("cosine dictionary needs 1 <= m <= n");
    Eigen::MatrixXd atoms(n, m);
    const double pi = std::acos(-1.0);
    for (int j = 0; j < m; ++j) {
        const double c = j == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int r = 0; r < n; ++r)
            atoms(r, j) = c * std::cos(pi * (2.0 * r + 1.0) * j / (2.0 * n));
    }
    return LocalDictionary(atoms);
}

void DictionaryDesignConfig::validate() const {
    if (n < 2 || m < 1) throw SpecInvalidError("filter design needs n >= 2 and m >= 1");
    if (!(coherence_lo > 0.0) || !(coherence_hi > coherence_lo))
        throw SpecInvalidError("coherence band must satisfy 0 < lo < hi");
    if (!(initial_step > 0.0)) throw SpecInvalidError("step length must be positive");
    if (max_rounds < 1 || max_attempts < 1)
        throw SpecInvalidError("round and attempt budgets must be positive");
}

namespace {

// All overlapping-pair correlations of the convolutional dictionary built
// from `atoms`: columns j1 and j2 offset by d in [0, n-1], excluding the unit
// self term.  The largest magnitude is the coherence for every N >= 2n-1.
struct PairCorrelation {
    int j1, j2, d;
    double value;
};

std::vector<PairCorrelation> pair_correlations(const Eigen::MatrixXd& atoms) {
    const int n = static_cast<int>(atoms.rows());
    const int m = static_cast<int>(atoms.cols());
    std::vector<PairCorrelation> out;
    out.reserve(static_cast<size_t>(n) * m * m);
    for (int d = 0; d < n; ++d)
        for (int j1 = 0; j1 < m; ++j1)
            for (int j2 = 0; j2 < m; ++j2) {
                if (d == 0 && j1 >= j2) continue;  // self term and symmetric duplicate
                double sum = 0.0;
                for (int u = 0; u + d < n; ++u) sum += atoms(u + d, j1) * atoms(u, j2);
                out.push_back({j1, j2, d, sum});
            }
    return out;
}

double max_correlation(const std::vector<PairCorrelation>& pairs) {
    double best = 0.0;
    for (const auto& p : pairs) best = std::max(best, std::abs(p.value));
    return best;
}

}  // namespace

LocalDictionary low_coherence_dictionary(std::uint64_t seed,
                                         const DictionaryDesignConfig& config) {
    config.validate();
    const int n = config.n, m = config.m;
    const double tau = 0.5 * (config.coherence_lo + config.coherence_hi);

    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        CounterRng rng(CounterRng::substream_seed(seed, static_cast<std::uint64_t>(attempt)));
        Eigen::MatrixXd atoms(n, m);
        for (int j = 0; j < m; ++j)
            for (int r = 0; r < n; ++r) atoms(r, j) = rng.gaussian();
        for (int j = 0; j < m; ++j) atoms.col(j) /= atoms.col(j).norm();

        double step = config.initial_step;
        Eigen::MatrixXd previous = atoms;
        for (int round = 0; round < config.max_rounds; ++round) {
            const auto pairs = pair_correlations(atoms);
            const double mu = max_correlation(pairs);
            if (mu >= config.coherence_lo && mu <= config.coherence_hi)
                return LocalDictionary(atoms);
            if (mu < config.coherence_lo) {
                // Jumped across the band: retreat and probe more carefully.
                atoms = previous;
                step *= 0.5;
                if (step < 1e-12) break;
                continue;
            }

            // Gradient of sum max(|c| - tau, 0)^2 over the correlations.
            Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, m);
            for (const auto& p : pairs) {
                const double excess = std::abs(p.value) - tau;
                if (excess <= 0.0) continue;
                const double coef = 2.0 * excess * (p.value > 0.0 ? 1.0 : -1.0);
                for (int u = 0; u + p.d < n; ++u) {
                    grad(u + p.d, p.j1) += coef * atoms(u, p.j2);
                    grad(u, p.j2) += coef * atoms(u + p.d, p.j1);
                }
            }
            const double gnorm = grad.norm();
            if (gnorm == 0.0) break;  // stalled outside the band; next attempt

            previous = atoms;
            atoms -= (step / gnorm) * grad;
            for (int j = 0; j < m; ++j) atoms.col(j) /= atoms.col(j).norm();
        }
    }
    throw SpecInvalidError("filter design did not reach the coherence band; "
                           "widen the band or raise the attempt budget");
}

}  // namespace csc
