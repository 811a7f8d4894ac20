#include "qswap/scenario_io.hpp"

namespace qswap {

namespace {

std::vector<Preset> make_presets() {
    std::vector<Preset> out;

    out.push_back({"teleport_d2", 1,
                   "Single qubit teleportation: Bell measurement on (1,2) moves the input from 1 to 3.",
                   R"({
  "kind": "teleportation",
  "dimension": 2,
  "input_state": [[0.6, 0.0], [0.8, 0.0]],
  "sources": {"23": "identity"},
  "bell_seeds": {"12": "identity"},
  "apply_corrections": true
})"});

    out.push_back({"swap_d2", 2,
                   "Entanglement swapping: Victor's Bell measurement on (2,3) first, Alice and Bob "
                   "measure (1,4) afterwards.",
                   R"({
  "kind": "swapping",
  "dimension": 2,
  "order": "forward",
  "sources": {"12": "identity", "34": "identity"},
  "victor_choice": "bell",
  "bell_seeds": {"23": "identity"},
  "orientations": {"alice": "haar:11", "bob": "haar:12"}
})"});

    out.push_back({"delayed_swap_separable", 3,
                   "Delayed-choice swapping: Alice and Bob record (1,4) first, Victor later projects "
                   "(2,3) onto the computational product basis (set victor_choice to 'bell' for his "
                   "entangled choice).",
                   R"({
  "kind": "swapping",
  "dimension": 2,
  "order": "reversed",
  "sources": {"12": "identity", "34": "identity"},
  "victor_choice": "separable",
  "orientations": {"alice": "haar:11", "bob": "haar:12"}
})"});

    out.push_back({"double_tele", 4,
                   "Double teleportation 0 -> 2 -> 4 over measurements on (0,1) and (2,3), Alice first.",
                   R"({
  "kind": "double_teleportation",
  "dimension": 2,
  "order": "forward",
  "input_state": [[0.6, 0.0], [0.0, 0.8]],
  "sources": {"12": "identity", "34": "identity"},
  "bell_seeds": {"01": "identity", "23": "identity"},
  "apply_corrections": true
})"});

    out.push_back({"double_tele_reversed", 5,
                   "Double teleportation with Victor first (swapping before the teleporting "
                   "measurement); Bob cannot tell the difference from double_tele.",
                   R"({
  "kind": "double_teleportation",
  "dimension": 2,
  "order": "reversed",
  "input_state": [[0.6, 0.0], [0.0, 0.8]],
  "sources": {"12": "identity", "34": "identity"},
  "bell_seeds": {"01": "identity", "23": "identity"},
  "apply_corrections": true
})"});

    out.push_back({"triple_shifted_d3", 6,
                   "Triple teleportation 0 -> 1 -> 2 -> 4 at d=3 with the shifted (0,2) choice: "
                   "Bob's state now depends on the measurement order.",
                   R"({
  "kind": "triple_teleportation",
  "dimension": 3,
  "order": "forward",
  "variant": "shifted",
  "input_state": [[0.6, 0.0], [0.0, 0.48], [0.64, 0.0]],
  "sources": {"12": "identity", "34": "identity"},
  "bell_seeds": {"01": "identity", "23": "identity"},
  "include_q02": true
})"});

    out.push_back({"triple_reversed_d3", 7,
                   "The shifted d=3 triple run in the reversed order (swapping first); compare "
                   "against triple_shifted_d3 to see the order dependence.",
                   R"({
  "kind": "triple_teleportation",
  "dimension": 3,
  "order": "reversed",
  "variant": "shifted",
  "input_state": [[0.6, 0.0], [0.0, 0.48], [0.64, 0.0]],
  "sources": {"12": "identity", "34": "identity"},
  "bell_seeds": {"01": "identity", "23": "identity"},
  "include_q02": true
})"});

    return out;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = make_presets();
    return all;
}

const Preset* find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace qswap
