// Command-line frontend: state classification, closed-loop simulation,
// barrier-projection meshing, and the verification suites.

#include "tdg/barrier_geometry.hpp"
#include "tdg/scenario.hpp"
#include "tdg/simulator.hpp"
#include "tdg/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

void print_point(std::ostream& out, const tdg::Vec& v) {
    out << "(";
    for (int i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    out << ")";
}

int cmd_classify(const std::string& scenario_path) {
    const tdg::ScenarioFile file = tdg::load_scenario(scenario_path);
    const tdg::Scenario& sc = file.scenario;
    const tdg::GameState s{sc.x_P0, sc.x_E0, 0.0};
    const tdg::ApolloniusRegion a = tdg::apollonius(sc.cfg, s);
    const tdg::BarrierResult b = tdg::barrier(sc.cfg, s, sc.target);
    std::cout.precision(12);
    std::cout << "barrier = " << b.value << "\n"
              << "region  = " << tdg::to_string(b.region) << "\n";
    std::cout << "alpha   = ";
    print_point(std::cout, a.alpha);
    std::cout << "\nbeta    = " << a.beta << "\nproj    = ";
    print_point(std::cout, b.projection_point);
    std::cout << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path) {
    const tdg::ScenarioFile file = tdg::load_scenario(scenario_path);
    const tdg::TrajectoryRecord rec = tdg::simulate(file.scenario);
    if (!out_path.empty()) {
        std::ofstream csv(out_path);
        if (!csv) throw tdg::DomainError("cannot open output file: " + out_path);
        tdg::write_trajectory_csv(csv, rec);
        std::ofstream js(out_path + ".json");
        tdg::write_trajectory_json(js, rec);
    }
    std::cout.precision(12);
    std::cout << "outcome=" << tdg::to_string(rec.outcome) << " t_f=" << rec.t_f
              << " payoff=" << rec.payoff << " switch_times=[";
    for (size_t i = 0; i < rec.switch_times.size(); ++i)
        std::cout << (i ? "," : "") << rec.switch_times[i];
    std::cout << "]\n";
    return kExitOk;
}

void write_pbs_svg(std::ostream& out, const std::vector<tdg::Vec>& points) {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (const auto& p : points) {
        minx = std::min(minx, p[0]);
        maxx = std::max(maxx, p[0]);
        miny = std::min(miny, p[1]);
        maxy = std::max(maxy, p[1]);
    }
    const double pad = 0.05 * std::max(maxx - minx, maxy - miny) + 1e-9;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << minx - pad << " "
        << -(maxy + pad) << " " << (maxx - minx) + 2 * pad << " " << (maxy - miny) + 2 * pad
        << "\">\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\""
        << 0.005 * (maxx - minx + 2 * pad) << "\" points=\"";
    for (const auto& p : points) out << p[0] << "," << -p[1] << " ";
    out << "\"/>\n</svg>\n";
}

int cmd_pbs(const std::string& scenario_path, int resolution, const std::string& out_path) {
    const tdg::ScenarioFile file = tdg::load_scenario(scenario_path);
    const tdg::Scenario& sc = file.scenario;
    const int n = sc.cfg.dimension;

    const bool analytic = std::holds_alternative<tdg::Singleton>(sc.target.data()) ||
                          std::holds_alternative<tdg::HalfSpace>(sc.target.data()) ||
                          std::holds_alternative<tdg::NormBall>(sc.target.data());

    std::vector<tdg::PbsSample> mesh;
    if (analytic) {
        const int count = n == 3 ? resolution * resolution : resolution;
        for (const tdg::Vec& z : tdg::sample_analytic_pbs(sc.target, sc.x_P0, sc.cfg, count)) {
            tdg::PbsSample s;
            s.pbs_point = z;
            const tdg::ApolloniusRegion a =
                tdg::apollonius(sc.cfg, tdg::GameState{sc.x_P0, z, 0.0});
            s.boundary_point = sc.target.project(a.alpha);
            mesh.push_back(std::move(s));
        }
    } else {
        mesh = tdg::sample_pbs_mesh(sc.target, sc.x_P0, sc.cfg, resolution);
    }

    {
        std::ofstream csv(out_path);
        if (!csv) throw tdg::DomainError("cannot open output file: " + out_path);
        tdg::write_mesh_csv(csv, mesh);
        std::ofstream js(out_path + ".json");
        tdg::write_mesh_json(js, mesh, resolution, n);
        if (n == 2) {
            std::vector<tdg::Vec> pts;
            for (const auto& s : mesh)
                if (s.ok) pts.push_back(s.pbs_point);
            if (!pts.empty()) pts.push_back(pts.front());  // close the curve
            std::ofstream svg(out_path + ".svg");
            write_pbs_svg(svg, pts);
        }
    }
    int bad = 0;
    for (const auto& s : mesh) bad += s.ok ? 0 : 1;
    std::cout << "pbs samples=" << mesh.size() << " failed=" << bad << " -> " << out_path << "\n";
    return bad == 0 ? kExitOk : kExitDomain;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
    if (suite != "hji" && suite != "gradients") {
        std::cerr << "error: unknown suite '" << suite << "' (expected hji | gradients)\n";
        return kExitUsage;
    }
    const std::vector<tdg::CheckReport> reports = tdg::run_suite(suite, seed);
    tdg::print_reports(std::cout, reports);
    if (!out_path.empty()) {
        std::ofstream js(out_path);
        if (!js) throw tdg::DomainError("cannot open output file: " + out_path);
        tdg::write_reports_json(js, reports);
    }
    for (const auto& r : reports)
        if (!r.pass) return kExitDomain;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-player target-defense differential game toolkit"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, suite = "hji";
    int resolution = 64;
    std::uint64_t seed = 0;

    auto* classify = app.add_subcommand("classify", "Classify the initial state");
    classify->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

    auto* simulate = app.add_subcommand("simulate", "Run a closed-loop simulation");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--out", out_path, "Trajectory CSV path (JSON written alongside)");

    auto* pbs = app.add_subcommand("pbs", "Sample the projected barrier surface");
    pbs->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    pbs->add_option("--resolution", resolution, "Samples per parameter direction")
        ->check(CLI::PositiveNumber);
    pbs->add_option("--out", out_path, "Mesh CSV path (JSON/SVG written alongside)")->required();

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("--suite", suite, "Suite name: hji | gradients");
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--out", out_path, "Report JSON path");

    try {
        app.parse(argc, argv);
        if (classify->parsed()) return cmd_classify(scenario_path);
        if (simulate->parsed()) return cmd_simulate(scenario_path, out_path);
        if (pbs->parsed()) return cmd_pbs(scenario_path, resolution, out_path);
        if (verify->parsed()) return cmd_verify(suite, seed, out_path);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const tdg::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
