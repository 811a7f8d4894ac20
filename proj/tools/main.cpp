#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qswap/scenario_io.hpp"

namespace {

using namespace qswap;

constexpr int kExitOk = 0;
constexpr int kExitDiff = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;

// Resolves a CLI argument to scenario text: an existing file wins, otherwise
// a bundled preset name.
ScenarioRequest resolve(const std::string& arg) {
    if (std::filesystem::exists(arg)) return load_scenario_file(arg);
    if (const Preset* p = find_preset(arg)) return parse_scenario_text(p->text, arg);
    throw ParseError(arg, "no such file and no such preset (see 'qswap presets')");
}

void apply_order_flag(Scenario& sc, const std::string& order) {
    if (order.empty()) return;
    if (order == "forward") sc.order = MeasurementOrder::forward;
    else if (order == "reversed") sc.order = MeasurementOrder::reversed;
    else throw ParseError("--order", "must be 'forward' or 'reversed'");
}

int cmd_run(const std::string& path, const std::string& order, const std::string& json_out,
            std::optional<std::uint64_t> samples, std::optional<std::uint64_t> seed) {
    ScenarioRequest req;
    try {
        req = resolve(path);
        apply_order_flag(req.scenario, order);
        if (samples) {
            SamplingRequest s;
            s.samples = *samples;
            s.seed = seed ? *seed : (req.sampling ? req.sampling->seed : 0);
            req.sampling = s;
        } else if (seed && req.sampling) {
            req.sampling->seed = *seed;
        }
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    RunReport report;
    try {
        report = run_and_compare(req.scenario, req.sampling);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    // Numeric invariants that must hold for any valid run.
    if (report.bob_defined) {
        double total = 0.0;
        for (const auto& row : report.rows) total += row.oracle_prob;
        if (std::abs(total - 1.0) > kScenarioTol) {
            std::cerr << "invariant breach: enumerated probabilities sum to " << total << "\n";
            return kExitInvariant;
        }
        if (report.verdict.max_prob_delta > 1e-6 || (report.verdict.min_fidelity >= 0.0 &&
                                                     report.verdict.min_fidelity < 0.5)) {
            std::cerr << "invariant breach: calculus and oracle disagree beyond any tolerance\n";
            return kExitInvariant;
        }
    }

    std::cout << render_report(report);
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) {
            std::cerr << "error: cannot write " << json_out << "\n";
            return kExitValidation;
        }
        out << report_to_json(report) << "\n";
    }
    return kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, double tol_prob, double tol_fid) {
    ScenarioRequest ra, rb;
    try {
        ra = resolve(a);
        rb = resolve(b);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    BranchSummary sa, sb;
    try {
        sa = summarize_run(ra.scenario);
        sb = summarize_run(rb.scenario);
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    if (sa.d != sb.d) {
        std::cerr << "incompatible: dimensions differ (" << sa.d << " vs " << sb.d << ")\n";
        return kExitValidation;
    }
    {
        auto keys_of = [](const BranchSummary& s) {
            std::vector<OutcomeKey> keys;
            for (const auto& [k, _] : s.probs) keys.push_back(k);
            return keys;
        };
        if (keys_of(sa) != keys_of(sb)) {
            std::cerr << "incompatible: outcome keyings differ\n";
            return kExitValidation;
        }
    }
    double max_delta = 0.0;
    double min_fid = 1.0;
    for (const auto& [key, pa] : sa.probs) {
        const double pb = sb.probs.at(key);
        max_delta = std::max(max_delta, std::abs(pa - pb));
        const auto& la = sa.locals.at(key);
        const auto& lb = sb.locals.at(key);
        if (la && lb) min_fid = std::min(min_fid, fidelity_up_to_phase(*la, *lb));
    }
    std::cout << "max_prob_delta=" << max_delta << " min_fidelity=" << min_fid << "\n";
    const bool same = max_delta <= tol_prob && min_fid >= 1.0 - tol_fid;
    std::cout << (same ? "match" : "differ") << "\n";
    return same ? kExitOk : kExitDiff;
}

int cmd_presets(const std::string& write_dir) {
    if (!write_dir.empty()) {
        std::filesystem::create_directories(write_dir);
        for (const auto& p : presets()) {
            std::ofstream out(std::filesystem::path(write_dir) / (p.name + ".json"));
            out << p.text << "\n";
        }
    }
    for (const auto& p : presets()) {
        std::cout << p.name << "  (set-up " << p.setup << ")\n    " << p.description << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qswap: qudit teleportation and entanglement-swapping simulator"};
    app.require_subcommand(1);

    std::string run_path, run_order, run_json;
    std::optional<std::uint64_t> run_samples, run_seed;
    CLI::App* run = app.add_subcommand("run", "run a scenario file or preset");
    run->add_option("file", run_path, "scenario file or preset name")->required();
    run->add_option("--order", run_order, "override the chronological order (forward|reversed)");
    run->add_option("--json", run_json, "write the machine-readable report here");
    run->add_option("--samples", run_samples, "draw this many Monte Carlo histories");
    run->add_option("--seed", run_seed, "sampling seed");

    std::string cmp_a, cmp_b;
    double tol_prob = 1e-10, tol_fid = 1e-9;
    CLI::App* cmp = app.add_subcommand("compare", "compare the branch tables of two scenarios");
    cmp->add_option("a", cmp_a, "first scenario file or preset")->required();
    cmp->add_option("b", cmp_b, "second scenario file or preset")->required();
    cmp->add_option("--tol", tol_prob, "probability tolerance");
    cmp->add_option("--tol-fidelity", tol_fid, "fidelity tolerance (1 - fidelity)");

    std::string write_dir;
    CLI::App* pre = app.add_subcommand("presets", "list the bundled scenarios");
    pre->add_option("--write", write_dir, "also write the preset files into this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_path, run_order, run_json, run_samples, run_seed);
        if (cmp->parsed()) return cmd_compare(cmp_a, cmp_b, tol_prob, tol_fid);
        if (pre->parsed()) return cmd_presets(write_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
