#pragma once

#include <cstdint>

#include "qaccel/svm.hpp"

namespace qaccel {

// Discretization of the SVM dual: alpha_i = sum_{j<K} B^j b_{i*K+j}
// (bit j ascending in significance), so each alpha lives on a grid in
// [0, sum_j B^j]. The equality constraint sum alpha_i y_i = 0 enters as a
// squared penalty weighted by `penalty`.
struct QuboEncoding {
    int n_samples = 0;
    int precision_bits = 2; // K
    double base = 2.0;      // B
    double penalty = 1.0;   // xi >= 0

    int dimension() const { return n_samples * precision_bits; }
};

// Upper-triangular coefficient matrix; the diagonal carries linear terms.
// energy(bits) = sum_{a<=c} Q_ac b_a b_c.
struct QuboMatrix {
    Eigen::MatrixXd q; // entries below the diagonal are zero

    int dimension() const { return static_cast<int>(q.rows()); }
};

// Expands dual objective + penalty at the decoded alphas into Q:
//   sum_{i,i'} alpha_i alpha_i' y_i y_i' (K_ii'/2 + xi) - sum_i alpha_i
QuboMatrix build_qubo(const Dataset& data, const KernelSpec& kernel,
                      const QuboEncoding& enc);

double energy(const QuboMatrix& q, const std::vector<int>& bits);

struct QuboSolution {
    std::vector<int> bits;
    double energy = 0.0;
};

inline constexpr int kExhaustiveCap = 24;

// Full enumeration (dimension <= 24); energy ties resolve to the
// lexicographically smallest bitstring (bit 0 first).
QuboSolution solve_exhaustive(const QuboMatrix& q);

// Single-bit-flip Metropolis annealing under geometric cooling from
// initial_temperature to final_temperature; best state seen across all
// restarts wins. sweeps = 0 degenerates to "best of the random initial
// states". Restart streams derive independently from the seed, so restarts
// are order-independent.
struct AnnealSchedule {
    double initial_temperature = 5.0;
    double final_temperature = 0.01;
    int sweeps = 200;
    int restarts = 10;
    std::uint64_t seed = 0;
};

QuboSolution solve_annealing(const QuboMatrix& q, const AnnealSchedule& sched);

// Decoded dual coefficients per the encoding.
Eigen::VectorXd decode_alphas(const std::vector<int>& bits, const QuboEncoding& enc);

// Builds an SvmModel from solved bits: support vectors are samples with
// alpha > 0, bias is the support-vector average of y_i - sum_j alpha_j y_j
// K(x_j, x_i). All-zero alphas raise DegenerateModelError.
SvmModel decode_model(const std::vector<int>& bits, const QuboEncoding& enc,
                      const Dataset& data, const KernelSpec& kernel);

// Plain-text upper-triangular COO export: one "i j value" line per nonzero.
std::string qubo_to_coo(const QuboMatrix& q);

// Build/solve scaling demonstration on generated two-feature blob data.
struct ScalingProbeRow {
    int n_samples = 0;
    int dimension = 0;
    long entries = 0; // upper triangle incl. diagonal
    double build_ms = 0.0;
    double solve_ms = 0.0;
};

std::vector<ScalingProbeRow> qubo_scaling_probe(const std::vector<int>& n_list, int precision_bits,
                                                std::uint64_t seed, bool measure_time = true);

} // namespace qaccel
