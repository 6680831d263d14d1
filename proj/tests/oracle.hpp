#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is rebuilt from first principles — kronecker products,
// eigendecompositions and brute-force enumeration — without calling the
// library's own gate_matrix / circuit_matrix / build_feature_map helpers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qaccel/circuit.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

inline Mat identity(int dim) { return Mat::Identity(dim, dim); }

inline Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Mat pauli_y() {
    Mat m(2, 2);
    m << std::complex<double>(0, 0), std::complex<double>(0, -1),
        std::complex<double>(0, 1), std::complex<double>(0, 0);
    return m;
}

inline Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Mat hadamard() {
    Mat m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

// Embeds a one-qubit operator at qubit q of an n-qubit register. Amplitude
// index bit k is qubit k, so qubit 0 is the rightmost kronecker factor.
inline Mat embed_1q(const Mat& u, int q, int n) {
    Mat m = Mat::Identity(1, 1);
    for (int k = n - 1; k >= 0; --k) m = kron(m, k == q ? u : identity(2));
    return m;
}

// e^{i * scale * H} for Hermitian H via full eigendecomposition.
inline Mat expi(const Mat& h, double scale) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    Vec phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        phases(k) = std::exp(std::complex<double>(0.0, scale * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat gate_oracle(const qaccel::Gate& g, int n) {
    const int dim = 1 << n;
    switch (g.kind) {
        case qaccel::GateKind::H:
            return embed_1q(hadamard(), g.targets[0], n);
        case qaccel::GateKind::RX:
            return embed_1q(expi(pauli_x(), -g.angle / 2.0), g.targets[0], n);
        case qaccel::GateKind::RY:
            return embed_1q(expi(pauli_y(), -g.angle / 2.0), g.targets[0], n);
        case qaccel::GateKind::RZ:
            return embed_1q(expi(pauli_z(), -g.angle / 2.0), g.targets[0], n);
        case qaccel::GateKind::RZZ: {
            const Mat zz =
                embed_1q(pauli_z(), g.targets[0], n) * embed_1q(pauli_z(), g.targets[1], n);
            return expi(zz, g.angle);
        }
        case qaccel::GateKind::CZ: {
            Mat m = identity(dim);
            for (int i = 0; i < dim; ++i) {
                if (((i >> g.targets[0]) & 1) != 0 && ((i >> g.targets[1]) & 1) != 0) {
                    m(i, i) = -1.0;
                }
            }
            return m;
        }
        case qaccel::GateKind::CNOT: {
            Mat m = Mat::Zero(dim, dim);
            for (int i = 0; i < dim; ++i) {
                const int j = ((i >> g.targets[0]) & 1) != 0 ? i ^ (1 << g.targets[1]) : i;
                m(j, i) = 1.0;
            }
            return m;
        }
    }
    throw std::runtime_error("unknown gate kind");
}

// Product of gate matrices; later gates multiply on the left.
inline Mat circuit_oracle(const qaccel::Circuit& c) {
    Mat u = identity(1 << c.n_qubits);
    for (const qaccel::Gate& g : c.gates) u = gate_oracle(g, c.n_qubits) * u;
    return u;
}

inline Vec state_oracle(const qaccel::Circuit& c) {
    Vec e0 = Vec::Zero(1 << c.n_qubits);
    e0(0) = 1.0;
    return circuit_oracle(c) * e0;
}

// Reference embedding state, built directly from the mathematical
// definition: per repetition, H on every qubit followed by the diagonal
// unitary exp(i [sum_k x_k Z_k + sum_k (pi-x_k)(pi-x_{k+1}) Z_k Z_{k+1}]),
// the exponent computed per basis state (Z eigenvalue +1 for bit 0).
inline Vec feature_map_oracle(const Eigen::VectorXd& x, int reps, bool two_body = true) {
    const int n = static_cast<int>(x.size());
    const int dim = 1 << n;
    Mat hall = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) hall = kron(hall, hadamard());
    const auto zval = [](int i, int q) { return ((i >> q) & 1) != 0 ? -1.0 : 1.0; };
    Mat d = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        double phase = 0.0;
        for (int q = 0; q < n; ++q) phase += x(q) * zval(i, q);
        if (two_body) {
            for (int q = 0; q + 1 < n; ++q) {
                phase += (M_PI - x(q)) * (M_PI - x(q + 1)) * zval(i, q) * zval(i, q + 1);
            }
        }
        d(i, i) = std::exp(std::complex<double>(0.0, phase));
    }
    const Mat rep = d * hall;
    Mat u = identity(dim);
    for (int r = 0; r < reps; ++r) u = rep * u;
    Vec e0 = Vec::Zero(dim);
    e0(0) = 1.0;
    return u * e0;
}

// Exact soft-margin SVM dual optimum by KKT active-set enumeration.
// Maximizes W(a) = sum a_i - 1/2 sum a_i a_j y_i y_j K_ij subject to
// 0 <= a_i <= C and sum a_i y_i = 0. Every index is assigned one of
// {at zero, at cap, free}; free coefficients and the bias solve the
// stationarity + equality system, then all KKT inequalities are checked.
// Any KKT point of this convex problem is a global optimum; the max over
// accepted candidates is returned. Tolerances loosen progressively so that
// numerically delicate problems still produce a certificate.
inline double svm_dual_optimum_oracle(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y,
                                      double cap) {
    const int n = static_cast<int>(y.size());
    if (gram.rows() != n || gram.cols() != n) throw std::runtime_error("gram shape mismatch");
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;

    const auto objective = [&](const Eigen::VectorXd& a) {
        double w = a.sum();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) w -= 0.5 * a(i) * a(j) * y(i) * y(j) * gram(i, j);
        }
        return w;
    };

    for (const double tol : {1e-9, 1e-7, 1e-6}) {
        bool found = false;
        double best = -std::numeric_limits<double>::infinity();
        for (long code = 0; code < total; ++code) {
            // state 0 = at zero, 1 = at cap, 2 = free
            std::vector<int> state(static_cast<std::size_t>(n));
            long rem = code;
            for (int i = 0; i < n; ++i) {
                state[static_cast<std::size_t>(i)] = static_cast<int>(rem % 3);
                rem /= 3;
            }
            std::vector<int> free;
            Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n; ++i) {
                if (state[static_cast<std::size_t>(i)] == 1) a(i) = cap;
                if (state[static_cast<std::size_t>(i)] == 2) free.push_back(i);
            }
            const int f = static_cast<int>(free.size());
            double b = 0.0;
            if (f > 0) {
                // Unknowns: free alphas then b.
                Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(f + 1, f + 1);
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f + 1);
                for (int r = 0; r < f; ++r) {
                    const int i = free[static_cast<std::size_t>(r)];
                    for (int c = 0; c < f; ++c) {
                        const int j = free[static_cast<std::size_t>(c)];
                        sys(r, c) = y(i) * y(j) * gram(i, j);
                    }
                    sys(r, f) = y(i);
                    double fixed = 0.0;
                    for (int j = 0; j < n; ++j) {
                        if (state[static_cast<std::size_t>(j)] == 1) {
                            fixed += y(j) * cap * gram(i, j);
                        }
                    }
                    rhs(r) = 1.0 - y(i) * fixed;
                }
                double cap_sum = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (state[static_cast<std::size_t>(j)] == 1) cap_sum += y(j) * cap;
                }
                for (int c = 0; c < f; ++c) sys(f, c) = y(free[static_cast<std::size_t>(c)]);
                rhs(f) = -cap_sum;

                Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
                if (!lu.isInvertible()) continue;
                const Eigen::VectorXd sol = lu.solve(rhs);
                bool ok = true;
                for (int r = 0; r < f; ++r) {
                    const double v = sol(r);
                    if (v < -tol || v > cap + tol) {
                        ok = false;
                        break;
                    }
                    a(free[static_cast<std::size_t>(r)]) = std::min(std::max(v, 0.0), cap);
                }
                if (!ok) continue;
                b = sol(f);
                // Check the inequality conditions at the fixed indices.
                for (int i = 0; i < n && ok; ++i) {
                    if (state[static_cast<std::size_t>(i)] == 2) continue;
                    double g = 0.0;
                    for (int j = 0; j < n; ++j) g += a(j) * y(j) * gram(i, j);
                    const double r = y(i) * (g + b) - 1.0;
                    if (state[static_cast<std::size_t>(i)] == 0 && r < -tol) ok = false;
                    if (state[static_cast<std::size_t>(i)] == 1 && r > tol) ok = false;
                }
                if (!ok) continue;
            } else {
                // No free coefficients: the equality constraint must hold as
                // fixed, and some bias must satisfy every inequality.
                double eq = 0.0;
                for (int j = 0; j < n; ++j) eq += a(j) * y(j);
                if (std::abs(eq) > 1e-9 * std::max(1.0, cap) * n) continue;
                double lo = -std::numeric_limits<double>::infinity();
                double hi = std::numeric_limits<double>::infinity();
                for (int i = 0; i < n; ++i) {
                    double g = 0.0;
                    for (int j = 0; j < n; ++j) g += a(j) * y(j) * gram(i, j);
                    // at zero: y_i (g + b) >= 1 - tol; at cap: <= 1 + tol.
                    if (state[static_cast<std::size_t>(i)] == 0) {
                        if (y(i) > 0) {
                            lo = std::max(lo, 1.0 - tol - g);
                        } else {
                            hi = std::min(hi, -(1.0 - tol) - g);
                        }
                    } else {
                        if (y(i) > 0) {
                            hi = std::min(hi, 1.0 + tol - g);
                        } else {
                            lo = std::max(lo, -(1.0 + tol) - g);
                        }
                    }
                }
                if (lo > hi) continue;
            }
            found = true;
            best = std::max(best, objective(a));
        }
        if (found) return best;
    }
    throw std::runtime_error("no KKT certificate found");
}

} // namespace oracle
