#include "tdg/simulator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace tdg {

namespace {

struct Controls {
    Vec u_P;
    Vec u_E;
};

Controls eval_controls(const Scenario& sc, const GameState& s) {
    // When both players follow the regime-switching optimal policy, one plan
    // evaluation yields both headings.
    if (sc.policy_P.kind == Policy::Kind::OptimalAuto &&
        sc.policy_E.kind == Policy::Kind::OptimalAuto) {
        const BarrierResult b = barrier(sc.cfg, s, sc.target);
        if (b.region == Region::AttackRegion) {
            const AttackPlan plan = attack_plan(sc.cfg, s, sc.target, sc.seed);
            return {plan.dir_P, plan.dir_E};
        }
        const CapturePlan plan = capture_plan(sc.cfg, s, sc.target);
        return {plan.dir_P, plan.dir_E};
    }
    return {policy_step(sc.policy_P, Role::Defender, sc.cfg, s, sc.target, sc.seed),
            policy_step(sc.policy_E, Role::Evader, sc.cfg, s, sc.target, sc.seed)};
}

GameState advance(const Scenario& sc, const GameState& s, double h) {
    auto deriv = [&](const GameState& state) -> std::pair<Vec, Vec> {
        const Controls c = eval_controls(sc, state);
        return {sc.cfg.v_P * c.u_P, sc.cfg.v_E * c.u_E};
    };
    const auto k1 = deriv(s);
    GameState s2{s.x_P + 0.5 * h * k1.first, s.x_E + 0.5 * h * k1.second, s.t + 0.5 * h};
    const auto k2 = deriv(s2);
    GameState s3{s.x_P + 0.5 * h * k2.first, s.x_E + 0.5 * h * k2.second, s.t + 0.5 * h};
    const auto k3 = deriv(s3);
    GameState s4{s.x_P + h * k3.first, s.x_E + h * k3.second, s.t + h};
    const auto k4 = deriv(s4);
    GameState out;
    out.x_P = s.x_P + (h / 6.0) * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
    out.x_E = s.x_E + (h / 6.0) * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    out.t = s.t + h;
    return out;
}

int barrier_sign(double value) {
    if (value > tol::kBarrier) return 1;
    if (value < -tol::kBarrier) return -1;
    return 0;
}

}  // namespace

TrajectoryRecord simulate(const Scenario& sc) {
    if (!(sc.dt > 0.0)) throw DomainError("dt must be positive");
    if (!(sc.t_max > 0.0)) throw DomainError("t_max must be positive");
    if (sc.capture_radius < 0.0) throw DomainError("capture_radius must be nonnegative");
    if (sc.x_P0.size() != sc.cfg.dimension || sc.x_E0.size() != sc.cfg.dimension)
        throw DomainError("initial positions must match the configured dimension");

    TrajectoryRecord rec;
    GameState s{sc.x_P0, sc.x_E0, 0.0};

    auto record = [&](const GameState& state) {
        const BarrierResult b = barrier(sc.cfg, state, sc.target);
        Controls c{Vec::Zero(sc.cfg.dimension), Vec::Zero(sc.cfg.dimension)};
        const Termination term = check_termination(sc.cfg, state, sc.target, sc.capture_radius);
        if (term == Termination::Running) c = eval_controls(sc, state);
        rec.steps.push_back({state.t, state.x_P, state.x_E, b.value, b.region, c.u_P, c.u_E});
        return b.value;
    };

    double prev_b = record(s);
    int prev_sign = barrier_sign(prev_b);
    double prev_t = 0.0;

    Termination term = check_termination(sc.cfg, s, sc.target, sc.capture_radius);
    std::size_t step_index = 0;
    while (term == Termination::Running && s.t < sc.t_max - 0.5 * sc.dt) {
        GameState next;
        try {
            next = advance(sc, s, sc.dt);
        } catch (const std::exception& e) {
            throw SolverFailure("strategy evaluation failed at step " +
                                    std::to_string(step_index) + ": " + e.what(),
                                0.0);
        }
        if (!next.x_P.allFinite() || !next.x_E.allFinite())
            throw SolverFailure("non-finite state at step " + std::to_string(step_index), 0.0);

        term = check_termination(sc.cfg, next, sc.target, sc.capture_radius);
        bool event_solved = false;
        if (term == Termination::Running) {
            // Interception can be overshot within one step once the gap drops
            // below the per-step travel. Detect an in-step separation minimum
            // via the start-of-step controls and solve the crossing time in closed form.
            const Controls c0 = eval_controls(sc, s);
            const Vec rel = s.x_E - s.x_P;
            const Vec w = sc.cfg.v_E * c0.u_E - sc.cfg.v_P * c0.u_P;
            const double w2 = w.squaredNorm();
            const double tau = w2 > 0.0 ? std::clamp(-rel.dot(w) / w2, 0.0, sc.dt) : 0.0;
            if (tau > 0.0 && (rel + tau * w).norm() <= sc.capture_radius) {
                // Freeze the controls over the terminal substep: feedback
                // directions are ill-conditioned once the players nearly
                // coincide, and the frozen-control motion is exact for the
                // straight saddle-point trajectories.
                const double eps2 = sc.capture_radius * sc.capture_radius;
                const double b = rel.dot(w);
                const double disc = b * b - w2 * (rel.squaredNorm() - eps2);
                const double h = disc >= 0.0 ? std::clamp((-b - std::sqrt(disc)) / w2, 0.0, tau)
                                             : tau;
                next.x_P = s.x_P + h * sc.cfg.v_P * c0.u_P;
                next.x_E = s.x_E + h * sc.cfg.v_E * c0.u_E;
                next.t = s.t + h;
                term = Termination::Captured;
                event_solved = true;
            }
        }
        if (term != Termination::Running && !event_solved) {
            // Refine the terminal time by bisection on the substep size.
            double lo = 0.0, hi = sc.dt;
            while (hi - lo > sc.dt * 1e-6) {
                const double mid = 0.5 * (lo + hi);
                const GameState sm = advance(sc, s, mid);
                (check_termination(sc.cfg, sm, sc.target, sc.capture_radius) ==
                         Termination::Running
                     ? lo
                     : hi) = mid;
            }
            next = advance(sc, s, hi);
            term = check_termination(sc.cfg, next, sc.target, sc.capture_radius);
            if (term == Termination::Running)  // boundary-of-interval artifact
                term = check_termination(sc.cfg, advance(sc, s, sc.dt), sc.target,
                                         sc.capture_radius);
        }
        s = next;
        const double b = record(s);
        const int sign = barrier_sign(b);
        if (sign != 0 && prev_sign != 0 && sign != prev_sign) {
            const double frac = prev_b / (prev_b - b);
            rec.switch_times.push_back(prev_t + frac * (s.t - prev_t));
        }
        if (sign != 0) {
            prev_sign = sign;
            prev_b = b;
            prev_t = s.t;
        }
        ++step_index;
    }

    rec.t_f = s.t;
    switch (term) {
        case Termination::Captured:
            rec.outcome = Outcome::Captured;
            rec.payoff = sc.target.distance(s.x_E);
            break;
        case Termination::Attacked:
            rec.outcome = Outcome::Attacked;
            rec.payoff = (s.x_E - s.x_P).norm();
            break;
        case Termination::Running:
            rec.outcome = Outcome::HorizonExceeded;
            rec.payoff = std::numeric_limits<double>::quiet_NaN();
            break;
    }
    return rec;
}

double straightness_deviation(const TrajectoryRecord& rec, Role agent) {
    if (rec.steps.size() < 2) throw DomainError("straightness_deviation: too few samples");
    auto pos = [&](const TrajectoryStep& st) -> const Vec& {
        return agent == Role::Defender ? st.x_P : st.x_E;
    };
    const Vec& a = pos(rec.steps.front());
    const Vec& b = pos(rec.steps.back());
    const Vec chord = b - a;
    const double len = chord.norm();
    if (len <= 0.0) throw DomainError("straightness_deviation: zero-length chord");
    double worst = 0.0;
    for (const auto& st : rec.steps) {
        const Vec d = pos(st) - a;
        worst = std::max(worst, (d - d.dot(chord) / (len * len) * chord).norm());
    }
    return worst / len;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec) {
    if (rec.steps.empty()) return;
    const int n = static_cast<int>(rec.steps.front().x_P.size());
    out << "t";
    for (int i = 0; i < n; ++i) out << ",xP" << i;
    for (int i = 0; i < n; ++i) out << ",xE" << i;
    out << ",barrier,regime";
    for (int i = 0; i < n; ++i) out << ",dirP" << i;
    for (int i = 0; i < n; ++i) out << ",dirE" << i;
    out << "\n";
    out.precision(17);
    for (const auto& st : rec.steps) {
        out << st.t;
        for (int i = 0; i < n; ++i) out << "," << st.x_P[i];
        for (int i = 0; i < n; ++i) out << "," << st.x_E[i];
        out << "," << st.barrier_value << "," << to_string(st.regime);
        for (int i = 0; i < n; ++i) out << "," << st.dir_P[i];
        for (int i = 0; i < n; ++i) out << "," << st.dir_E[i];
        out << "\n";
    }
}

void write_trajectory_json(std::ostream& out, const TrajectoryRecord& rec) {
    nlohmann::json j;
    j["outcome"] = to_string(rec.outcome);
    j["t_f"] = rec.t_f;
    j["payoff"] = rec.payoff;
    j["switch_times"] = rec.switch_times;
    auto& steps = j["steps"] = nlohmann::json::array();
    for (const auto& st : rec.steps) {
        nlohmann::json row;
        row["t"] = st.t;
        row["x_P"] = std::vector<double>(st.x_P.data(), st.x_P.data() + st.x_P.size());
        row["x_E"] = std::vector<double>(st.x_E.data(), st.x_E.data() + st.x_E.size());
        row["barrier"] = st.barrier_value;
        row["regime"] = to_string(st.regime);
        row["dir_P"] = std::vector<double>(st.dir_P.data(), st.dir_P.data() + st.dir_P.size());
        row["dir_E"] = std::vector<double>(st.dir_E.data(), st.dir_E.data() + st.dir_E.size());
        steps.push_back(std::move(row));
    }
    out << j.dump(2);
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Captured: return "Captured";
        case Outcome::Attacked: return "Attacked";
        case Outcome::HorizonExceeded: return "HorizonExceeded";
    }
    return "?";
}

}  // namespace tdg
