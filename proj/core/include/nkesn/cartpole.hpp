#ifndef NKESN_CARTPOLE_HPP
#define NKESN_CARTPOLE_HPP

#include <optional>

namespace nkesn {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }

// Full state of the cart with two poles. Angles are measured from vertical
// (0 = upright), positive force pushes the cart in +x.
struct CartPoleState {
    double cart_pos = 0.0;     // m
    double cart_vel = 0.0;     // m/s
    double pole1_angle = 0.0;  // rad
    double pole1_vel = 0.0;    // rad/s
    double pole2_angle = 0.0;  // rad
    double pole2_vel = 0.0;    // rad/s

    bool finite() const;
};

// Physical constants of the benchmark. Pole lengths are full lengths; the
// dynamics internally uses the half-length (distance from hinge to the
// center of mass of a uniform pole).
struct PhysicsParams {
    double cart_mass = 1.0;      // kg
    double pole1_mass = 0.1;     // kg
    double pole2_mass = 0.01;    // kg
    double pole1_length = 1.0;   // m, full length
    double pole2_length = 0.1;   // m, full length
    double mu_cart = 0.0005;     // cart-track friction coefficient
    double mu_pole = 0.000002;   // pole hinge friction, N*m*s
    double gravity = 9.8;        // m/s^2, positive magnitude, acts downward
    double dt = 0.01;            // s, integration step

    bool valid() const;
};

// Episode termination box: cart inside the track, both poles near vertical.
struct SuccessDomain {
    double x_limit = 2.4;                    // m
    double angle_limit = deg_to_rad(36.0);   // rad
};

// Time derivatives of all six state fields under the equations of motion for
// a cart carrying two independent poles (pole angular accelerations couple
// through the cart acceleration). The returned struct holds
// (cart_vel, cart_acc, pole1_vel, pole1_acc, pole2_vel, pole2_acc).
CartPoleState derivatives(const CartPoleState& state, double force,
                          const PhysicsParams& params);

// Classical fourth-order Runge-Kutta step of length params.dt with the force
// held constant across the four stages. Empty result if any output field is
// non-finite.
std::optional<CartPoleState> rk4_step(const CartPoleState& state, double force,
                                      const PhysicsParams& params);

bool in_success_domain(const CartPoleState& state, const SuccessDomain& domain);

}  // namespace nkesn

#endif
