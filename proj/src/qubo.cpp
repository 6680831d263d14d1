#include "qaccel/qubo.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

namespace qaccel {

namespace {

constexpr std::uint64_t kRestartStream = 0x72737472; // "rstr"

void validate_encoding(const QuboEncoding& enc) {
    if (enc.n_samples < 1) throw ValidationError("encoding needs at least one sample");
    if (enc.precision_bits < 1) throw ValidationError("precision_bits must be >= 1");
    if (enc.base <= 0.0) throw ValidationError("encoding base must be positive");
    if (enc.penalty < 0.0) throw ValidationError("penalty must be nonnegative");
}

void validate_bits(const QuboMatrix& q, const std::vector<int>& bits) {
    if (static_cast<int>(bits.size()) != q.dimension()) {
        throw ValidationError("bit vector length does not match QUBO dimension");
    }
    for (int b : bits) {
        if (b != 0 && b != 1) throw ValidationError("bits must be 0 or 1");
    }
}

// Energy change of flipping bit k given current bits (b_k -> 1 - b_k).
double flip_delta(const QuboMatrix& q, const std::vector<int>& bits, int k) {
    const int dim = q.dimension();
    double coupling = q.q(k, k);
    for (int a = 0; a < k; ++a) coupling += q.q(a, k) * bits[static_cast<std::size_t>(a)];
    for (int c = k + 1; c < dim; ++c) coupling += q.q(k, c) * bits[static_cast<std::size_t>(c)];
    return bits[static_cast<std::size_t>(k)] ? -coupling : coupling;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

} // namespace

QuboMatrix build_qubo(const Dataset& data, const KernelSpec& kernel, const QuboEncoding& enc) {
    data.validate();
    validate_encoding(enc);
    if (data.n_samples() != enc.n_samples) {
        throw ValidationError("encoding sample count does not match dataset");
    }
    const int n = enc.n_samples;
    const int K = enc.precision_bits;
    const int dim = enc.dimension();

    Eigen::VectorXd weight(K); // B^j, j ascending in significance
    for (int j = 0; j < K; ++j) weight[j] = std::pow(enc.base, j);

    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = data.labels[i] == 1 ? 1.0 : -1.0;

    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
        for (int c = i; c < n; ++c) {
            gram(i, c) = kernel_eval(kernel, data.features.row(i), data.features.row(c));
            gram(c, i) = gram(i, c);
        }
    }

    QuboMatrix q;
    q.q = Eigen::MatrixXd::Zero(dim, dim);
    for (int a = 0; a < dim; ++a) {
        const int ia = a / K;
        const double wa = weight[a % K];
        // Same-variable terms (b^2 = b): quadratic diagonal plus the linear part.
        q.q(a, a) = wa * wa * (0.5 * gram(ia, ia) + enc.penalty) - wa;
        for (int c = a + 1; c < dim; ++c) {
            const int ic = c / K;
            const double wc = weight[c % K];
            q.q(a, c) = 2.0 * wa * wc * y[ia] * y[ic] * (0.5 * gram(ia, ic) + enc.penalty);
        }
    }
    return q;
}

double energy(const QuboMatrix& q, const std::vector<int>& bits) {
    validate_bits(q, bits);
    const int dim = q.dimension();
    double e = 0.0;
    for (int a = 0; a < dim; ++a) {
        if (!bits[static_cast<std::size_t>(a)]) continue;
        e += q.q(a, a);
        for (int c = a + 1; c < dim; ++c) {
            if (bits[static_cast<std::size_t>(c)]) e += q.q(a, c);
        }
    }
    return e;
}

QuboSolution solve_exhaustive(const QuboMatrix& q) {
    const int dim = q.dimension();
    if (dim < 1) throw ValidationError("QUBO has no variables");
    if (dim > kExhaustiveCap) {
        throw CapacityError("exhaustive enumeration capped at " +
                            std::to_string(kExhaustiveCap) + " variables, got " +
                            std::to_string(dim));
    }

    // Gray-code walk: exactly one bit flips between consecutive states, so
    // the running energy updates in O(dim). Candidate optima are re-evaluated
    // from scratch before acceptance, keeping tie comparisons exact.
    std::vector<int> bits(static_cast<std::size_t>(dim), 0);
    std::vector<int> best_bits = bits;
    double running = 0.0;
    double best = 0.0; // energy of the all-zero state
    const std::uint64_t states = std::uint64_t{1} << dim;
    for (std::uint64_t s = 1; s < states; ++s) {
        const int k = std::countr_zero(s); // bit flipped by Gray code at step s
        running += flip_delta(q, bits, k);
        bits[static_cast<std::size_t>(k)] ^= 1;
        if ((s & 0xfff) == 0) running = energy(q, bits); // purge accumulated rounding
        if (running <= best + 1e-9) {
            const double exact = energy(q, bits);
            if (exact < best || (exact == best && lex_less(bits, best_bits))) {
                best = exact;
                best_bits = bits;
            }
            running = exact;
        }
    }
    return {best_bits, best};
}

QuboSolution solve_annealing(const QuboMatrix& q, const AnnealSchedule& sched) {
    const int dim = q.dimension();
    if (dim < 1) throw ValidationError("QUBO has no variables");
    if (sched.initial_temperature <= 0.0 || sched.final_temperature <= 0.0) {
        throw ValidationError("temperatures must be positive");
    }
    if (sched.sweeps < 0) throw ValidationError("sweeps must be >= 0");
    if (sched.restarts < 1) throw ValidationError("restarts must be >= 1");

    QuboSolution best;
    bool have_best = false;
    for (int r = 0; r < sched.restarts; ++r) {
        Rng rng(mix_seed(sched.seed, kRestartStream, static_cast<std::uint64_t>(r)));
        std::vector<int> bits(static_cast<std::size_t>(dim));
        for (int k = 0; k < dim; ++k) bits[static_cast<std::size_t>(k)] = rng.bernoulli(0.5);
        double e = energy(q, bits);
        auto consider = [&](const std::vector<int>& state, double value) {
            if (!have_best || value < best.energy) {
                best.bits = state;
                best.energy = value;
                have_best = true;
            }
        };
        consider(bits, e);
        for (int sweep = 0; sweep < sched.sweeps; ++sweep) {
            const double frac = sched.sweeps > 1
                                    ? static_cast<double>(sweep) / static_cast<double>(sched.sweeps - 1)
                                    : 0.0;
            const double t = sched.initial_temperature *
                             std::pow(sched.final_temperature / sched.initial_temperature, frac);
            for (int k = 0; k < dim; ++k) {
                const double delta = flip_delta(q, bits, k);
                if (delta <= 0.0 || rng.u01() < std::exp(-delta / t)) {
                    bits[static_cast<std::size_t>(k)] ^= 1;
                    e += delta;
                    if (e < best.energy || !have_best) consider(bits, e);
                }
            }
        }
    }
    // Guard against drift in the incrementally tracked energies.
    best.energy = energy(q, best.bits);
    return best;
}

Eigen::VectorXd decode_alphas(const std::vector<int>& bits, const QuboEncoding& enc) {
    validate_encoding(enc);
    if (static_cast<int>(bits.size()) != enc.dimension()) {
        throw ValidationError("bit vector length does not match encoding dimension");
    }
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(enc.n_samples);
    for (int i = 0; i < enc.n_samples; ++i) {
        double v = 0.0;
        for (int j = 0; j < enc.precision_bits; ++j) {
            if (bits[static_cast<std::size_t>(i * enc.precision_bits + j)]) {
                v += std::pow(enc.base, j);
            }
        }
        alpha[i] = v;
    }
    return alpha;
}

SvmModel decode_model(const std::vector<int>& bits, const QuboEncoding& enc,
                      const Dataset& data, const KernelSpec& kernel) {
    data.validate();
    if (data.n_samples() != enc.n_samples) {
        throw ValidationError("encoding sample count does not match dataset");
    }
    const Eigen::VectorXd alpha = decode_alphas(bits, enc);
    std::vector<int> sv;
    for (int i = 0; i < enc.n_samples; ++i) {
        if (alpha[i] > 0.0) sv.push_back(i);
    }
    if (sv.empty()) throw DegenerateModelError("decoded solution has no support vectors");

    Eigen::VectorXd y(data.n_samples());
    for (int i = 0; i < data.n_samples(); ++i) y[i] = data.labels[i] == 1 ? 1.0 : -1.0;

    SvmModel model;
    model.kernel = kernel;
    double box = 0.0; // encoding's implicit upper bound on each alpha
    for (int j = 0; j < enc.precision_bits; ++j) box += std::pow(enc.base, j);
    model.C = box;
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), data.features.cols());
    model.dual_coefs.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
        model.support_vectors.row(static_cast<Eigen::Index>(k)) = data.features.row(sv[k]);
        model.dual_coefs[static_cast<Eigen::Index>(k)] = y[sv[k]] * alpha[sv[k]];
    }
    double bias_sum = 0.0;
    for (int i : sv) {
        double f = 0.0;
        for (int j : sv) {
            f += alpha[j] * y[j] * kernel_eval(kernel, data.features.row(j), data.features.row(i));
        }
        bias_sum += y[i] - f;
    }
    model.bias = bias_sum / static_cast<double>(sv.size());
    return model;
}

std::string qubo_to_coo(const QuboMatrix& q) {
    const int dim = q.dimension();
    std::string out;
    for (int a = 0; a < dim; ++a) {
        for (int c = a; c < dim; ++c) {
            if (q.q(a, c) == 0.0) continue;
            out += std::to_string(a);
            out += ' ';
            out += std::to_string(c);
            out += ' ';
            out += double_repr(q.q(a, c));
            out += '\n';
        }
    }
    return out;
}

std::vector<ScalingProbeRow> qubo_scaling_probe(const std::vector<int>& n_list, int precision_bits,
                                                std::uint64_t seed, bool measure_time) {
    std::vector<ScalingProbeRow> rows;
    for (int n : n_list) {
        if (n < 2) throw ValidationError("probe sizes must be >= 2");
        // Two separable Gaussian blobs, one feature pair per sample.
        Dataset data;
        data.features.resize(n, 2);
        data.labels.resize(n);
        data.drive_ids.resize(static_cast<std::size_t>(n));
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
        for (int i = 0; i < n; ++i) {
            const int label = i % 2;
            data.labels[i] = label;
            data.features(i, 0) = rng.normal() * 0.5 + (label ? 2.0 : 0.0);
            data.features(i, 1) = rng.normal() * 0.5 + (label ? 2.0 : 0.0);
            data.drive_ids[static_cast<std::size_t>(i)] = "probe";
        }
        QuboEncoding enc;
        enc.n_samples = n;
        enc.precision_bits = precision_bits;

        ScalingProbeRow row;
        row.n_samples = n;
        row.dimension = enc.dimension();
        row.entries = static_cast<long>(row.dimension) * (row.dimension + 1) / 2;

        const double t0 = now_ms();
        const QuboMatrix q = build_qubo(data, KernelSpec::rbf(), enc);
        const double t1 = now_ms();
        AnnealSchedule sched;
        sched.seed = mix_seed(seed, static_cast<std::uint64_t>(n), 1);
        solve_annealing(q, sched);
        const double t2 = now_ms();
        if (measure_time) {
            row.build_ms = t1 - t0;
            row.solve_ms = t2 - t1;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace qaccel
