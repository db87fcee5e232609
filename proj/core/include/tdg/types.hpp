#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace tdg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when an iterative solver exhausts its iteration budget.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Invalid arguments or operations that are not defined for the given input.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace tol {
// Projection accuracy: closed forms vs iterative solvers.
inline constexpr double kProjClosed = 1e-10;
inline constexpr double kProjIter = 1e-8;
// Set-membership tolerance for numerical variants.
inline constexpr double kMembership = 1e-9;
// Dead-band around zero for classifying a state as on the barrier.
inline constexpr double kBarrier = 1e-9;
// How far off the boundary a point may be and still count as a boundary point.
inline constexpr double kBoundary = 1e-6;
// Accuracy of mapped barrier-projection samples.
inline constexpr double kPbs = 1e-7;
}  // namespace tol

// Speeds and speed ratio of the two agents. v_E == gamma * v_P always holds.
struct GameConfig {
    int dimension;
    double gamma;
    double v_P;
    double v_E;

    static GameConfig make(int dimension, double gamma, double v_P = 1.0) {
        if (dimension < 1) throw DomainError("dimension must be >= 1");
        if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0,1)");
        if (!(v_P > 0.0)) throw DomainError("v_P must be positive");
        return GameConfig{dimension, gamma, v_P, gamma * v_P};
    }
};

// Positions of the defender and the attacker at time t.
struct GameState {
    Vec x_P;
    Vec x_E;
    double t = 0.0;
};

}  // namespace tdg
