#include "nkesn/cartpole.hpp"

#include <cmath>

namespace nkesn {

namespace {

// sgn with sgn(0) = 0, so the cart friction term vanishes at rest and the
// zero state stays a fixed point.
double sgn(double v) { return (v > 0.0) - (v < 0.0); }

struct PoleTerms {
    double effective_force = 0.0;  // contribution to the cart equation
    double effective_mass = 0.0;
    double hinge_term = 0.0;       // mu_p * omega / (m * l), reused for theta_ddot
};

// Per-pole quantities with the signed-gravity convention: the vertical
// position is an unstable equilibrium, so gravity enters the angle equation
// with the sign that grows |theta|.
PoleTerms pole_terms(double angle, double omega, double mass, double full_length,
                     double mu_pole, double g_signed) {
    const double l = 0.5 * full_length;  // hinge to center of mass
    const double s = std::sin(angle);
    const double c = std::cos(angle);
    PoleTerms t;
    t.hinge_term = mu_pole * omega / (mass * l);
    t.effective_force = mass * l * omega * omega * s +
                        0.75 * mass * c * (t.hinge_term + g_signed * s);
    t.effective_mass = mass * (1.0 - 0.75 * c * c);
    return t;
}

}  // namespace

bool CartPoleState::finite() const {
    return std::isfinite(cart_pos) && std::isfinite(cart_vel) &&
           std::isfinite(pole1_angle) && std::isfinite(pole1_vel) &&
           std::isfinite(pole2_angle) && std::isfinite(pole2_vel);
}

bool PhysicsParams::valid() const {
    return cart_mass > 0.0 && pole1_mass > 0.0 && pole2_mass > 0.0 &&
           pole1_length > 0.0 && pole2_length > 0.0 && mu_cart >= 0.0 &&
           mu_pole >= 0.0 && gravity > 0.0 && dt > 0.0;
}

CartPoleState derivatives(const CartPoleState& state, double force,
                          const PhysicsParams& params) {
    const double g_signed = -params.gravity;

    const PoleTerms p1 = pole_terms(state.pole1_angle, state.pole1_vel,
                                    params.pole1_mass, params.pole1_length,
                                    params.mu_pole, g_signed);
    const PoleTerms p2 = pole_terms(state.pole2_angle, state.pole2_vel,
                                    params.pole2_mass, params.pole2_length,
                                    params.mu_pole, g_signed);

    const double cart_acc =
        (force - params.mu_cart * sgn(state.cart_vel) + p1.effective_force +
         p2.effective_force) /
        (params.cart_mass + p1.effective_mass + p2.effective_mass);

    const double l1 = 0.5 * params.pole1_length;
    const double l2 = 0.5 * params.pole2_length;
    const double pole1_acc =
        -0.75 *
        (cart_acc * std::cos(state.pole1_angle) +
         g_signed * std::sin(state.pole1_angle) + p1.hinge_term) /
        l1;
    const double pole2_acc =
        -0.75 *
        (cart_acc * std::cos(state.pole2_angle) +
         g_signed * std::sin(state.pole2_angle) + p2.hinge_term) /
        l2;

    CartPoleState d;
    d.cart_pos = state.cart_vel;
    d.cart_vel = cart_acc;
    d.pole1_angle = state.pole1_vel;
    d.pole1_vel = pole1_acc;
    d.pole2_angle = state.pole2_vel;
    d.pole2_vel = pole2_acc;
    return d;
}

namespace {

CartPoleState axpy(const CartPoleState& s, double h, const CartPoleState& d) {
    CartPoleState r;
    r.cart_pos = s.cart_pos + h * d.cart_pos;
    r.cart_vel = s.cart_vel + h * d.cart_vel;
    r.pole1_angle = s.pole1_angle + h * d.pole1_angle;
    r.pole1_vel = s.pole1_vel + h * d.pole1_vel;
    r.pole2_angle = s.pole2_angle + h * d.pole2_angle;
    r.pole2_vel = s.pole2_vel + h * d.pole2_vel;
    return r;
}

}  // namespace

std::optional<CartPoleState> rk4_step(const CartPoleState& state, double force,
                                      const PhysicsParams& params) {
    const double h = params.dt;
    const CartPoleState k1 = derivatives(state, force, params);
    const CartPoleState k2 = derivatives(axpy(state, 0.5 * h, k1), force, params);
    const CartPoleState k3 = derivatives(axpy(state, 0.5 * h, k2), force, params);
    const CartPoleState k4 = derivatives(axpy(state, h, k3), force, params);

    CartPoleState next;
    next.cart_pos = state.cart_pos +
                    h / 6.0 * (k1.cart_pos + 2.0 * k2.cart_pos + 2.0 * k3.cart_pos + k4.cart_pos);
    next.cart_vel = state.cart_vel +
                    h / 6.0 * (k1.cart_vel + 2.0 * k2.cart_vel + 2.0 * k3.cart_vel + k4.cart_vel);
    next.pole1_angle =
        state.pole1_angle +
        h / 6.0 * (k1.pole1_angle + 2.0 * k2.pole1_angle + 2.0 * k3.pole1_angle + k4.pole1_angle);
    next.pole1_vel =
        state.pole1_vel +
        h / 6.0 * (k1.pole1_vel + 2.0 * k2.pole1_vel + 2.0 * k3.pole1_vel + k4.pole1_vel);
    next.pole2_angle =
        state.pole2_angle +
        h / 6.0 * (k1.pole2_angle + 2.0 * k2.pole2_angle + 2.0 * k3.pole2_angle + k4.pole2_angle);
    next.pole2_vel =
        state.pole2_vel +
        h / 6.0 * (k1.pole2_vel + 2.0 * k2.pole2_vel + 2.0 * k3.pole2_vel + k4.pole2_vel);

    if (!next.finite()) return std::nullopt;
    return next;
}

bool in_success_domain(const CartPoleState& state, const SuccessDomain& domain) {
    return std::abs(state.cart_pos) <= domain.x_limit &&
           std::abs(state.pole1_angle) <= domain.angle_limit &&
           std::abs(state.pole2_angle) <= domain.angle_limit;
}

}  // namespace nkesn
