#include "tdg/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace tdg {

namespace {

using nlohmann::json;

Vec parse_point(const json& j, int dimension, const std::string& key) {
    if (!j.is_array())
        throw ScenarioError("'" + key + "' must be an array of numbers");
    if (static_cast<int>(j.size()) != dimension)
        throw ScenarioError("'" + key + "' must have length " + std::to_string(dimension));
    Vec v(dimension);
    for (int i = 0; i < dimension; ++i) {
        if (!j[i].is_number()) throw ScenarioError("'" + key + "' must contain only numbers");
        v[i] = j[i].get<double>();
    }
    return v;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ScenarioError("unknown key '" + key + "' in " + where);
}

TargetSet parse_target(const json& j, int dimension) {
    if (!j.is_object() || !j.contains("type"))
        throw ScenarioError("'target' must be an object with a 'type' key");
    const std::string type = j.at("type").get<std::string>();
    if (type == "singleton") {
        reject_unknown_keys(j, {"type", "point"}, "target");
        return TargetSet::singleton(parse_point(j.at("point"), dimension, "target.point"));
    }
    if (type == "halfspace") {
        reject_unknown_keys(j, {"type", "normal", "offset"}, "target");
        return TargetSet::half_space(parse_point(j.at("normal"), dimension, "target.normal"),
                                     j.value("offset", 0.0));
    }
    if (type == "ball") {
        reject_unknown_keys(j, {"type", "center", "radius"}, "target");
        Vec center = j.contains("center") ? parse_point(j.at("center"), dimension, "target.center")
                                          : Vec::Zero(dimension);
        return TargetSet::norm_ball(std::move(center), j.at("radius").get<double>());
    }
    if (type == "ellipsoid") {
        reject_unknown_keys(j, {"type", "center", "semi_axes"}, "target");
        Vec center = j.contains("center") ? parse_point(j.at("center"), dimension, "target.center")
                                          : Vec::Zero(dimension);
        return TargetSet::ellipsoid(std::move(center),
                                    parse_point(j.at("semi_axes"), dimension, "target.semi_axes"));
    }
    if (type == "polytope") {
        reject_unknown_keys(j, {"type", "faces"}, "target");
        std::vector<HalfSpace> faces;
        for (const auto& f : j.at("faces")) {
            reject_unknown_keys(f, {"normal", "offset"}, "target.faces[]");
            faces.push_back(
                {parse_point(f.at("normal"), dimension, "faces[].normal"), f.value("offset", 0.0)});
        }
        return TargetSet::polytope(std::move(faces));
    }
    if (type == "pnorm") {
        // Superellipsoid {sum |z_i - c_i|^p <= r^p}; power 4 gives the quartic cube.
        reject_unknown_keys(j, {"type", "center", "power", "radius"}, "target");
        const double p = j.at("power").get<double>();
        const double r = j.value("radius", 1.0);
        if (p < 2.0) throw ScenarioError("pnorm power must be >= 2 for a smooth boundary");
        if (r <= 0.0) throw ScenarioError("pnorm radius must be positive");
        Vec center = j.contains("center") ? parse_point(j.at("center"), dimension, "target.center")
                                          : Vec::Zero(dimension);
        auto value = [center, p, r](const Vec& z) {
            double s = -std::pow(r, p);
            for (int i = 0; i < z.size(); ++i) s += std::pow(std::abs(z[i] - center[i]), p);
            return s;
        };
        auto gradient = [center, p](const Vec& z) {
            Vec g(z.size());
            for (int i = 0; i < z.size(); ++i) {
                const double d = z[i] - center[i];
                g[i] = p * std::pow(std::abs(d), p - 1.0) * (d >= 0.0 ? 1.0 : -1.0);
            }
            return g;
        };
        return TargetSet::smooth_level_set(value, gradient, center);
    }
    throw ScenarioError("unknown target type '" + type + "'");
}

Policy parse_policy(const std::string& name, Role role, const json& doc, int dimension) {
    if (name == "optimal") return Policy::optimal();
    if (name == "pure_pursuit") {
        if (role != Role::Defender) throw ScenarioError("pure_pursuit is a defender policy");
        return Policy::pure_pursuit();
    }
    if (name == "direct_to") {
        if (role != Role::Evader) throw ScenarioError("direct_to is an evader policy");
        if (!doc.contains("direct_to"))
            throw ScenarioError("policy 'direct_to' requires the 'direct_to' point");
        return Policy::direct_to(parse_point(doc.at("direct_to"), dimension, "direct_to"));
    }
    throw ScenarioError("unknown policy '" + name + "'");
}

}  // namespace

ScenarioFile parse_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ScenarioError("scenario document must be a JSON object");
    reject_unknown_keys(doc,
                        {"dimension", "gamma", "v_P", "target", "x_P0", "x_E0", "policy_P",
                         "policy_E", "dt", "t_max", "capture_radius", "seed", "direct_to"},
                        "scenario");
    for (const char* key : {"dimension", "gamma", "target", "x_P0", "x_E0"})
        if (!doc.contains(key)) throw ScenarioError(std::string("missing key '") + key + "'");

    const int dimension = doc.at("dimension").get<int>();
    if (dimension < 1) throw ScenarioError("dimension must be >= 1");
    const double gamma = doc.at("gamma").get<double>();
    if (!(gamma > 0.0 && gamma < 1.0)) throw ScenarioError("gamma must lie in (0,1)");
    const double v_P = doc.value("v_P", 1.0);
    if (!(v_P > 0.0)) throw ScenarioError("v_P must be positive");

    const std::string policy_P = doc.value("policy_P", std::string("optimal"));
    const std::string policy_E = doc.value("policy_E", std::string("optimal"));

    Scenario sc{GameConfig::make(dimension, gamma, v_P),
                parse_target(doc.at("target"), dimension),
                parse_point(doc.at("x_P0"), dimension, "x_P0"),
                parse_point(doc.at("x_E0"), dimension, "x_E0"),
                parse_policy(policy_P, Role::Defender, doc, dimension),
                parse_policy(policy_E, Role::Evader, doc, dimension),
                doc.value("dt", 1e-3),
                doc.value("t_max", 50.0),
                doc.value("capture_radius", 1e-3),
                doc.value("seed", std::uint64_t{0})};
    if (!(sc.dt > 0.0)) throw ScenarioError("dt must be positive");
    if (!(sc.t_max > 0.0)) throw ScenarioError("t_max must be positive");
    if (sc.capture_radius < 0.0) throw ScenarioError("capture_radius must be nonnegative");
    if (sc.policy_E.kind == Policy::Kind::DirectTo &&
        !sc.target.contains(sc.policy_E.direct_target))
        throw ScenarioError("'direct_to' point must lie in the target set");

    json normalized = doc;
    normalized["v_P"] = v_P;
    normalized["policy_P"] = policy_P;
    normalized["policy_E"] = policy_E;
    normalized["dt"] = sc.dt;
    normalized["t_max"] = sc.t_max;
    normalized["capture_radius"] = sc.capture_radius;
    normalized["seed"] = sc.seed;
    return ScenarioFile{std::move(sc), std::move(normalized)};
}

ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(std::string("scenario parse error: ") + e.what());
    }
    return parse_scenario(doc);
}

}  // namespace tdg
