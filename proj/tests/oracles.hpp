#ifndef NKESN_TESTS_ORACLES_HPP
#define NKESN_TESTS_ORACLES_HPP

// Independent reference computations for tests. Nothing here may call into
// the implementation paths it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "nkesn/cartpole.hpp"
#include "nkesn/landscape.hpp"

namespace oracles {

// Total mechanical energy of the cart and two uniform poles, from first
// principles (kinetic energy of cart + each pole's center-of-mass motion and
// rotation about it, plus gravitational potential of the pole centers).
inline double mechanical_energy(const nkesn::CartPoleState& s,
                                const nkesn::PhysicsParams& p) {
    const double g = p.gravity;
    double e = 0.5 * p.cart_mass * s.cart_vel * s.cart_vel;
    const double masses[2] = {p.pole1_mass, p.pole2_mass};
    const double halves[2] = {0.5 * p.pole1_length, 0.5 * p.pole2_length};
    const double angles[2] = {s.pole1_angle, s.pole2_angle};
    const double omegas[2] = {s.pole1_vel, s.pole2_vel};
    for (int i = 0; i < 2; ++i) {
        const double m = masses[i], l = halves[i];
        // v_cm^2 = xd^2 + 2 l xd w cos(th) + l^2 w^2; I_cm = m l^2 / 3.
        const double v2 = s.cart_vel * s.cart_vel +
                          2.0 * l * s.cart_vel * omegas[i] * std::cos(angles[i]) +
                          l * l * omegas[i] * omegas[i];
        e += 0.5 * m * v2;
        e += 0.5 * (m * l * l / 3.0) * omegas[i] * omegas[i];
        e += m * g * l * std::cos(angles[i]);
    }
    return e;
}

// Spectral radius estimate by power iteration. Handles a dominant complex
// conjugate pair by fitting v_{k+2} = a v_{k+1} + b v_k in least squares and
// taking the largest root magnitude of z^2 - a z - b.
inline double power_iteration_spectral_radius(const Eigen::MatrixXd& m, int iters = 20000,
                                              std::uint64_t seed = 1) {
    const Eigen::Index n = m.rows();
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(eng);
    v.normalize();
    for (int it = 0; it < iters; ++it) {
        v = m * v;
        const double norm = v.norm();
        if (norm == 0.0) return 0.0;
        v /= norm;
    }
    const Eigen::VectorXd w1 = m * v;
    const Eigen::VectorXd w2 = m * w1;
    // Least squares for (a, b) in w2 = a w1 + b v.
    Eigen::Matrix2d gram;
    gram << w1.dot(w1), w1.dot(v), w1.dot(v), v.dot(v);
    Eigen::Vector2d rhs(w2.dot(w1), w2.dot(v));
    const Eigen::Vector2d ab = gram.ldlt().solve(rhs);
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(ab(0) * ab(0) + 4.0 * ab(1), 0.0));
    const std::complex<double> r1 = 0.5 * (ab(0) + disc);
    const std::complex<double> r2 = 0.5 * (ab(0) - disc);
    return std::max(std::abs(r1), std::abs(r2));
}

// Sub-pattern extraction written against the canonical-order definition
// directly: the j-th smallest probe index contributes bit j.
inline std::uint32_t extract_pattern(const nkesn::BitVector& x, std::vector<int> row) {
    std::sort(row.begin(), row.end());
    std::uint32_t p = 0;
    for (std::size_t j = 0; j < row.size(); ++j)
        p |= static_cast<std::uint32_t>(x[row[j]] != 0) << j;
    return p;
}

// The 625-state generalization grid, generated with explicit tabulated
// fractions and an independent loop structure.
inline std::vector<nkesn::CartPoleState> reference_grid() {
    const double fr[5] = {0.05, 0.25, 0.50, 0.75, 0.95};
    const double lo[4] = {-2.14, -1.35, -3.6 * nkesn::kPi / 180.0, -8.6 * nkesn::kPi / 180.0};
    std::vector<nkesn::CartPoleState> grid(625);
    for (int idx = 0; idx < 625; ++idx) {
        const int ip = idx / 125, iv = (idx / 25) % 5, ia = (idx / 5) % 5, iw = idx % 5;
        nkesn::CartPoleState s;
        s.cart_pos = lo[0] + fr[ip] * (-2.0 * lo[0]);
        s.cart_vel = lo[1] + fr[iv] * (-2.0 * lo[1]);
        s.pole1_angle = lo[2] + fr[ia] * (-2.0 * lo[2]);
        s.pole1_vel = lo[3] + fr[iw] * (-2.0 * lo[3]);
        grid[idx] = s;
    }
    return grid;
}

// Random landscape with uniform table entries, for solver cross-checks.
inline nkesn::NkLandscape random_landscape(int n, int k, nkesn::Neighborhood model,
                                           std::uint64_t seed) {
    nkesn::NetworkConfig cfg;
    cfg.n_outputs = n;
    cfg.k = k;
    cfg.neighborhood = model;
    cfg.seed = seed;
    nkesn::NkLandscape l;
    l.n = n;
    l.arity = k + 1;
    l.masks = nkesn::make_mask_table(cfg);
    std::mt19937_64 eng(seed * 7919 + 13);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    l.tables.resize(n);
    for (auto& t : l.tables) {
        t.resize(std::size_t(1) << (k + 1));
        for (auto& v : t) v = dist(eng);
    }
    return l;
}

}  // namespace oracles

#endif
