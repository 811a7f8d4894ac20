#include "qswap/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qswap/rng.hpp"

namespace qswap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path, what); }

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path, bool fallback) {
    if (j.is_null()) return fallback;
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

Cx get_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(path, "expected a complex number as [re, im]");
    return Cx(j[0].get<double>(), j[1].get<double>());
}

std::vector<Cx> get_cvector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of [re, im] pairs");
    std::vector<Cx> v;
    for (size_t i = 0; i < j.size(); ++i) v.push_back(get_complex(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

Matrix get_matrix_literal(const json& j, int d, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        fail(path, "expected " + std::to_string(d) + " matrix rows");
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            fail(path + "[" + std::to_string(i) + "]",
                 "matrix row must have " + std::to_string(d) + " entries");
        for (int k = 0; k < d; ++k)
            m(i, k) = get_complex(row[static_cast<size_t>(k)],
                                  path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

Matrix named_matrix(const std::string& name, int d, const std::string& path) {
    if (name == "identity") return Matrix::identity(d);
    if (name == "shift") return weyl_x(d);
    if (name == "fourier") return fourier(d);
    if (name.rfind("haar:", 0) == 0) {
        try {
            Rng rng(std::stoull(name.substr(5)));
            return rng.haar_unitary(d);
        } catch (const std::invalid_argument&) {
            fail(path, "haar preset needs an integer seed, e.g. haar:42");
        }
    }
    if (name.rfind("bell:", 0) == 0) {
        if (d != 2) fail(path, "named Bell presets are defined for dimension 2");
        const std::string which = name.substr(5);
        Matrix m(2, 2);
        if (which == "phi+") m = Matrix::identity(2);
        else if (which == "phi-") m = weyl_z(2);
        else if (which == "psi+") m = weyl_x(2);
        else if (which == "psi-") { m(0, 1) = Cx(-1.0, 0.0); m(1, 0) = Cx(1.0, 0.0); }
        else fail(path, "unknown Bell preset '" + which + "'");
        return m;
    }
    fail(path, "unknown matrix preset '" + name + "'");
}

Matrix get_matrix(const json& j, int d, const std::string& path) {
    Matrix m = j.is_string() ? named_matrix(j.get<std::string>(), d, path) : get_matrix_literal(j, d, path);
    if (m.unitary_deviation() > kOpTol) fail(path, "matrix is not unitary");
    return m;
}

Isometry get_isometry(const json& sources, const std::string& key, FactorLabel from, FactorLabel to,
                      int d, const std::string& path) {
    return Isometry(from, to, d, get_matrix(require(sources, key, path), d, path + "." + key), true);
}

std::optional<Isometry> optional_isometry(const json& j, const std::string& key, FactorLabel from,
                                          FactorLabel to, int d, const std::string& path) {
    if (!j.is_object()) return std::nullopt;
    auto it = j.find(key);
    if (it == j.end()) return std::nullopt;
    return Isometry(from, to, d, get_matrix(*it, d, path + "." + key), true);
}

Ket get_input(const json& j, FactorLabel label, int d, const std::string& path) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name.rfind("haar:", 0) == 0) {
            try {
                Rng rng(std::stoull(name.substr(5)));
                return Ket::single(label, rng.state(d));
            } catch (const std::invalid_argument&) {
                fail(path, "haar preset needs an integer seed, e.g. haar:42");
            }
        }
        fail(path, "unknown input preset '" + name + "'");
    }
    std::vector<Cx> amps = get_cvector(j, path);
    if (static_cast<int>(amps.size()) != d) fail(path, "input state needs exactly d amplitudes");
    const double n = vec_norm(amps);
    if (std::abs(n - 1.0) > kScenarioTol) fail(path, "input state is not normalized");
    return Ket::single(label, std::move(amps));
}

}  // namespace

ScenarioRequest parse_scenario_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin, e.what());
    }
    const std::string root = origin + ": $";
    const std::string kind = get_string(require(j, "kind", root), root + ".kind");
    const int d = get_int(require(j, "dimension", root), root + ".dimension");
    if (d < 2 || d > 8) fail(root + ".dimension", "dimension must be between 2 and 8");

    MeasurementOrder order = MeasurementOrder::forward;
    if (j.contains("order")) {
        const std::string o = get_string(j["order"], root + ".order");
        if (o == "forward") order = MeasurementOrder::forward;
        else if (o == "reversed") order = MeasurementOrder::reversed;
        else fail(root + ".order", "order must be 'forward' or 'reversed'");
    }

    const json seeds = j.contains("bell_seeds") ? j["bell_seeds"] : json::object();
    const std::string seeds_path = root + ".bell_seeds";

    Scenario sc = [&]() -> Scenario {
        try {
            if (kind == "teleportation") {
                const Ket input = get_input(require(j, "input_state", root), 1, d, root + ".input_state");
                const json& sources = require(j, "sources", root);
                const Isometry s23 = get_isometry(sources, "23", 2, 3, d, root + ".sources");
                return build_teleportation(d, input, s23,
                                           optional_isometry(seeds, "12", 1, 2, d, seeds_path));
            }
            if (kind == "swapping") {
                const json& sources = require(j, "sources", root);
                const Isometry s12 = get_isometry(sources, "12", 1, 2, d, root + ".sources");
                const Isometry s34 = get_isometry(sources, "34", 3, 4, d, root + ".sources");
                VictorChoice choice = VictorChoice::bell;
                if (j.contains("victor_choice")) {
                    const std::string c = get_string(j["victor_choice"], root + ".victor_choice");
                    if (c == "bell") choice = VictorChoice::bell;
                    else if (c == "separable") choice = VictorChoice::separable;
                    else fail(root + ".victor_choice", "must be 'bell' or 'separable'");
                }
                Matrix onb_a = Matrix::identity(d);
                Matrix onb_b = Matrix::identity(d);
                bool include_ab = true;
                if (j.contains("orientations")) {
                    const json& o = j["orientations"];
                    if (o.is_string() && o.get<std::string>() == "none") {
                        include_ab = false;
                    } else {
                        onb_a = get_matrix(require(o, "alice", root + ".orientations"), d,
                                           root + ".orientations.alice");
                        onb_b = get_matrix(require(o, "bob", root + ".orientations"), d,
                                           root + ".orientations.bob");
                    }
                }
                return build_swapping(d, s12, s34, order, onb_a, onb_b, choice,
                                      optional_isometry(seeds, "23", 2, 3, d, seeds_path), include_ab);
            }
            if (kind == "double_teleportation") {
                const Ket input = get_input(require(j, "input_state", root), 0, d, root + ".input_state");
                const json& sources = require(j, "sources", root);
                const Isometry s12 = get_isometry(sources, "12", 1, 2, d, root + ".sources");
                const Isometry s34 = get_isometry(sources, "34", 3, 4, d, root + ".sources");
                return build_double_teleportation(d, input, order, s12, s34,
                                                  optional_isometry(seeds, "01", 0, 1, d, seeds_path),
                                                  optional_isometry(seeds, "23", 2, 3, d, seeds_path));
            }
            if (kind == "triple_teleportation") {
                const Ket input = get_input(require(j, "input_state", root), 0, d, root + ".input_state");
                TripleVariant variant = TripleVariant::plain;
                std::optional<Matrix> u0;
                if (j.contains("variant")) {
                    const std::string v = get_string(j["variant"], root + ".variant");
                    if (v == "default") variant = TripleVariant::plain;
                    else if (v == "shifted") variant = TripleVariant::shifted;
                    else if (v == "unitary") variant = TripleVariant::unitary;
                    else fail(root + ".variant", "must be 'default', 'shifted' or 'unitary'");
                }
                if (variant == TripleVariant::unitary)
                    u0 = get_matrix(require(j, "unitary_u0", root), d, root + ".unitary_u0");
                std::optional<Isometry> s12, s34;
                if (j.contains("sources")) {
                    const json& sources = j["sources"];
                    s12 = optional_isometry(sources, "12", 1, 2, d, root + ".sources");
                    s34 = optional_isometry(sources, "34", 3, 4, d, root + ".sources");
                }
                return build_triple_teleportation(
                    d, input, variant, order, get_bool(j.value("include_q02", json()), root, true), u0,
                    s12, s34, optional_isometry(seeds, "01", 0, 1, d, seeds_path),
                    optional_isometry(seeds, "23", 2, 3, d, seeds_path));
            }
            fail(root + ".kind", "unknown kind '" + kind + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const SimError& e) {
            throw ParseError(root, e.what());
        }
    }();

    sc.order = order;
    sc.apply_corrections = get_bool(j.value("apply_corrections", json()), root + ".apply_corrections", false);

    ScenarioRequest req{std::move(sc), std::nullopt};
    if (j.contains("samples")) {
        const int samples = get_int(j["samples"], root + ".samples");
        if (samples < 0) fail(root + ".samples", "samples must be >= 0");
        if (samples > 0) {
            SamplingRequest s;
            s.samples = static_cast<std::uint64_t>(samples);
            s.seed = j.contains("seed")
                         ? static_cast<std::uint64_t>(get_int(j["seed"], root + ".seed"))
                         : 0;
            req.sampling = s;
        }
    }
    return req;
}

ScenarioRequest load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path);
}

namespace {

json key_to_json(const OutcomeKey& key) {
    json out = json::array();
    for (const auto& [name, idx] : key) out.push_back(json::array({name, idx}));
    return out;
}

OutcomeKey key_from_json(const json& j) {
    OutcomeKey key;
    for (const auto& e : j) key.emplace_back(e[0].get<std::string>(), e[1].get<int>());
    return key;
}

std::string order_name(MeasurementOrder o) {
    return o == MeasurementOrder::forward ? "forward" : "reversed";
}

}  // namespace

std::string report_to_json(const RunReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(json{{"outcome", key_to_json(row.key)},
                            {"predicted_prob", row.predicted_prob},
                            {"oracle_prob", row.oracle_prob},
                            {"fidelity", row.fidelity},
                            {"corrected_fidelity", row.corrected_fidelity},
                            {"zero_branch", row.zero_branch},
                            {"sample_freq", row.sample_freq}});
    }
    json pairs = json::array();
    for (const auto& p : r.verdict.set_pairs) {
        pairs.push_back(json{{"set_a", p.set_a},
                             {"set_b", p.set_b},
                             {"max_commutator", p.max_commutator},
                             {"commuting", p.commuting},
                             {"max_witness", p.max_witness}});
    }
    json j{{"kind", to_string(r.kind)},
           {"dimension", r.d},
           {"order", order_name(r.order)},
           {"bob_defined", r.bob_defined},
           {"rows", rows},
           {"verdict",
            json{{"order_dependent", r.verdict.order_dependent},
                 {"max_prob_delta", r.verdict.max_prob_delta},
                 {"min_fidelity", r.verdict.min_fidelity},
                 {"cross_order_max_prob_delta", r.verdict.cross_order_max_prob_delta},
                 {"cross_order_min_fidelity", r.verdict.cross_order_min_fidelity},
                 {"set_pairs", pairs}}},
           {"metadata", json{{"seed", r.seed}, {"runtime_ms", r.runtime_ms}}}};
    if (r.sampling) {
        j["sampling"] = json{{"samples", r.sampling->samples},
                             {"seed", r.sampling->seed},
                             {"chi_squared", r.sampling->chi_squared},
                             {"degrees_of_freedom", r.sampling->degrees_of_freedom}};
    } else {
        j["sampling"] = nullptr;
    }
    return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("report", e.what());
    }
    RunReport r;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "teleportation") r.kind = ScenarioKind::teleportation;
    else if (kind == "swapping") r.kind = ScenarioKind::swapping;
    else if (kind == "double_teleportation") r.kind = ScenarioKind::double_teleportation;
    else if (kind == "triple_teleportation") r.kind = ScenarioKind::triple_teleportation;
    else throw ParseError("report.kind", "unknown kind");
    r.d = j.at("dimension").get<int>();
    r.order = j.at("order").get<std::string>() == "reversed" ? MeasurementOrder::reversed
                                                             : MeasurementOrder::forward;
    r.bob_defined = j.at("bob_defined").get<bool>();
    for (const auto& e : j.at("rows")) {
        OutcomeRow row;
        row.key = key_from_json(e.at("outcome"));
        row.predicted_prob = e.at("predicted_prob").get<double>();
        row.oracle_prob = e.at("oracle_prob").get<double>();
        row.fidelity = e.at("fidelity").get<double>();
        row.corrected_fidelity = e.at("corrected_fidelity").get<double>();
        row.zero_branch = e.at("zero_branch").get<bool>();
        row.sample_freq = e.at("sample_freq").get<double>();
        r.rows.push_back(std::move(row));
    }
    const json& v = j.at("verdict");
    r.verdict.order_dependent = v.at("order_dependent").get<bool>();
    r.verdict.max_prob_delta = v.at("max_prob_delta").get<double>();
    r.verdict.min_fidelity = v.at("min_fidelity").get<double>();
    r.verdict.cross_order_max_prob_delta = v.at("cross_order_max_prob_delta").get<double>();
    r.verdict.cross_order_min_fidelity = v.at("cross_order_min_fidelity").get<double>();
    for (const auto& e : v.at("set_pairs")) {
        SetPairDiag p;
        p.set_a = e.at("set_a").get<std::string>();
        p.set_b = e.at("set_b").get<std::string>();
        p.max_commutator = e.at("max_commutator").get<double>();
        p.commuting = e.at("commuting").get<bool>();
        p.max_witness = e.at("max_witness").get<double>();
        r.verdict.set_pairs.push_back(std::move(p));
    }
    if (!j.at("sampling").is_null()) {
        SamplingSummary s;
        s.samples = j["sampling"].at("samples").get<std::uint64_t>();
        s.seed = j["sampling"].at("seed").get<std::uint64_t>();
        s.chi_squared = j["sampling"].at("chi_squared").get<double>();
        s.degrees_of_freedom = j["sampling"].at("degrees_of_freedom").get<int>();
        r.sampling = s;
    }
    r.seed = j.at("metadata").at("seed").get<std::uint64_t>();
    r.runtime_ms = j.at("metadata").at("runtime_ms").get<double>();
    return r;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string key_label(const OutcomeKey& key) {
    std::string s;
    for (size_t i = 0; i < key.size(); ++i) {
        if (i) s += " ";
        s += key[i].first + "=" + std::to_string(key[i].second);
    }
    return s;
}

}  // namespace

std::string render_report(const RunReport& r) {
    std::ostringstream out;
    out << "scenario: " << to_string(r.kind) << "  d=" << r.d << "  order=" << order_name(r.order)
        << "\n";
    if (!r.bob_defined) {
        out << "empty measurement sequence: nothing to run (no output state defined)\n";
        return out.str();
    }
    out << "outcome | predicted_prob | oracle_prob | fidelity";
    const bool corrected = std::any_of(r.rows.begin(), r.rows.end(),
                                       [](const OutcomeRow& x) { return x.corrected_fidelity >= 0.0; });
    const bool sampled = r.sampling.has_value();
    if (corrected) out << " | corrected_fidelity";
    if (sampled) out << " | sample_freq";
    out << "\n";
    for (const auto& row : r.rows) {
        out << key_label(row.key) << " | " << fmt(row.predicted_prob) << " | " << fmt(row.oracle_prob)
            << " | " << (row.zero_branch ? "zero-branch" : fmt(row.fidelity));
        if (corrected) out << " | " << (row.corrected_fidelity >= 0.0 ? fmt(row.corrected_fidelity) : "-");
        if (sampled) out << " | " << fmt(row.sample_freq);
        out << "\n";
    }
    out << "verdict: order_dependent=" << (r.verdict.order_dependent ? "true" : "false")
        << " max_prob_delta=" << fmt(r.verdict.max_prob_delta)
        << " min_fidelity=" << fmt(r.verdict.min_fidelity)
        << " cross_order_max_prob_delta=" << fmt(r.verdict.cross_order_max_prob_delta)
        << " cross_order_min_fidelity=" << fmt(r.verdict.cross_order_min_fidelity) << "\n";
    for (const auto& p : r.verdict.set_pairs) {
        out << "  [" << p.set_a << ", " << p.set_b << "] max_commutator=" << fmt(p.max_commutator)
            << " commuting=" << (p.commuting ? "true" : "false")
            << " max_witness=" << fmt(p.max_witness) << "\n";
    }
    if (r.sampling) {
        out << "sampling: n=" << r.sampling->samples << " seed=" << r.sampling->seed
            << " chi_squared=" << fmt(r.sampling->chi_squared)
            << " dof=" << r.sampling->degrees_of_freedom << "\n";
    }
    out << "metadata: d=" << r.d << " seed=" << r.seed << " runtime_ms=" << fmt(r.runtime_ms) << "\n";
    return out.str();
}

BranchSummary summarize_run(const Scenario& sc) {
    BranchSummary out;
    out.d = sc.d;
    const auto seq = sc.sequence();
    const Ket initial = sc.initial_state();
    const Prediction pred = predict(sc);
    const auto records = run_history(initial, seq);
    for (const auto& r : records) {
        const OutcomeKey key = outcome_key(r.outcomes);
        out.probs[key] = r.joint_prob;
        if (!r.zero_branch && r.joint_prob > kZeroProb)
            out.locals[key] = extract_pure(r.final_state, pred.compare_labels);
        else
            out.locals[key] = std::nullopt;
    }
    return out;
}

}  // namespace qswap
