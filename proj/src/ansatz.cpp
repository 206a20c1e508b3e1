// Copyright 2026 The Titan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "titan/ansatz.hpp"

#include "json.hpp"

namespace titan {

std::string family_name(Family f) {
    switch (f) {
    case Family::HEA: return "HEA";
    case Family::HEA_T1: return "HEA_T1";
    case Family::SU2: return "SU2";
    case Family::SEL: return "SEL";
    case Family::UNSTRUCTURED: return "UNSTRUCTURED";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "HEA") return Family::HEA;
    if (name == "HEA_T1") return Family::HEA_T1;
    if (name == "SU2") return Family::SU2;
    if (name == "SEL") return Family::SEL;
    if (name == "UNSTRUCTURED") return Family::UNSTRUCTURED;
    throw_config("unknown ansatz family '" + name + "'");
}

namespace {

void check_sizes(const char* what, int n, int l) {
    if (n < 2 || l < 1) {
        throw_config(std::string(what) + ": need n >= 2 and l >= 1, got n=" +
                     std::to_string(n) + " l=" + std::to_string(l));
    }
}

Slot tunable(GateKind kind, int qubit, int param_id) {
    Slot s;
    s.gate.kind = kind;
    s.gate.target = qubit;
    s.param_id = param_id;
    return s;
}

Slot fixed(const Gate& g) {
    Slot s;
    s.gate = g;
    return s;
}

// Appends one tunable sublayer (slot index d) across all qubits, ids per the
// canonical order id = (l*D + d)*n + q.
void sublayer(std::vector<Slot>& slots, GateKind kind, int n, int l, int d,
              int D) {
    for (int q = 0; q < n; ++q) {
        slots.push_back(tunable(kind, q, (l * D + d) * n + q));
    }
}

void fill_coords(CircuitSpec& spec) {
    const int P = spec.layers * spec.slots_per_qubit * spec.grid_width;
    spec.coords.resize(P);
    for (int l = 0; l < spec.layers; ++l) {
        for (int d = 0; d < spec.slots_per_qubit; ++d) {
            for (int q = 0; q < spec.grid_width; ++q) {
                spec.coords[(l * spec.slots_per_qubit + d) * spec.grid_width +
                            q] = {l, d, q};
            }
        }
    }
}

} // namespace

CircuitSpec hea(int n, int l) {
    check_sizes("hea", n, l);
    CircuitSpec spec;
    spec.family = Family::HEA;
    spec.n_qubits = n;
    spec.layers = l;
    spec.slots_per_qubit = 1;
    spec.grid_width = n;
    for (int layer = 0; layer < l; ++layer) {
        sublayer(spec.slots, GateKind::RX, n, layer, 0, 1);
        for (int q = 0; q + 1 < n; ++q) {
            spec.slots.push_back(fixed(Gate::cnot(q, q + 1)));
        }
    }
    fill_coords(spec);
    return spec;
}

CircuitSpec hea_t1(int n, int l, const std::vector<Mat2>& twirl) {
    check_sizes("hea_t1", n, l);
    if (static_cast<int>(twirl.size()) != n) {
        throw_shape("hea_t1: twirl has " + std::to_string(twirl.size()) +
                    " gates, expected " + std::to_string(n));
    }
    for (const Mat2& m : twirl) {
        if (!mat2_is_unitary(m)) {
            throw_validation("hea_t1: twirl gate is not unitary within 1e-12");
        }
    }
    CircuitSpec spec;
    spec.family = Family::HEA_T1;
    spec.n_qubits = n;
    spec.layers = l;
    spec.slots_per_qubit = 2;
    spec.grid_width = n;
    spec.twirl = twirl;
    for (int layer = 0; layer < l; ++layer) {
        sublayer(spec.slots, GateKind::RY, n, layer, 0, 2);
        for (int q = 0; q + 1 < n; ++q) {
            spec.slots.push_back(fixed(Gate::cz(q, q + 1)));
        }
        if (layer == 0) {
            for (int q = 0; q < n; ++q) {
                spec.slots.push_back(fixed(Gate::fixed1q(q, twirl[q])));
            }
        }
        sublayer(spec.slots, GateKind::RY, n, layer, 1, 2);
    }
    fill_coords(spec);
    return spec;
}

CircuitSpec su2(int n, int l) {
    check_sizes("su2", n, l);
    CircuitSpec spec;
    spec.family = Family::SU2;
    spec.n_qubits = n;
    spec.layers = l;
    spec.slots_per_qubit = 2;
    spec.grid_width = n;
    for (int layer = 0; layer < l; ++layer) {
        sublayer(spec.slots, GateKind::RY, n, layer, 0, 2);
        sublayer(spec.slots, GateKind::RZ, n, layer, 1, 2);
        for (int q = 0; q + 1 < n; ++q) {
            spec.slots.push_back(fixed(Gate::cnot(q, q + 1)));
        }
    }
    fill_coords(spec);
    return spec;
}

CircuitSpec sel(int n, int l) {
    check_sizes("sel", n, l);
    CircuitSpec spec;
    spec.family = Family::SEL;
    spec.n_qubits = n;
    spec.layers = l;
    spec.slots_per_qubit = 3;
    spec.grid_width = n;
    for (int layer = 0; layer < l; ++layer) {
        sublayer(spec.slots, GateKind::RZ, n, layer, 0, 3);
        sublayer(spec.slots, GateKind::RY, n, layer, 1, 3);
        sublayer(spec.slots, GateKind::RZ, n, layer, 2, 3);
        for (int q = 0; q < n; ++q) {
            spec.slots.push_back(fixed(Gate::cnot(q, (q + 1) % n)));
        }
    }
    fill_coords(spec);
    return spec;
}

CircuitSpec unstructured(int n_qubits, std::vector<Slot> slots) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw_config("unstructured: bad qubit count " +
                     std::to_string(n_qubits));
    }
    int p = 0;
    for (Slot& s : slots) {
        if (s.param_id >= 0) s.param_id = p++;
    }
    if (p == 0) throw_validation("unstructured: no tunable slots");

    CircuitSpec spec;
    spec.family = Family::UNSTRUCTURED;
    spec.n_qubits = n_qubits;
    spec.layers = 1;
    spec.slots_per_qubit = 1;
    spec.grid_width = p;
    spec.slots = std::move(slots);
    spec.coords.resize(p);
    for (int i = 0; i < p; ++i) spec.coords[i] = {0, 0, i};
    return spec;
}

StateVector run_circuit(const CircuitSpec& spec, const ParamVector& theta) {
    if (static_cast<int>(theta.size()) != spec.param_count()) {
        throw_shape("run_circuit: got " + std::to_string(theta.size()) +
                    " parameters, circuit has " +
                    std::to_string(spec.param_count()));
    }
    StateVector state = zero_state(spec.n_qubits);
    for (const Slot& s : spec.slots) {
        if (s.tunable()) {
            Gate g = s.gate;
            g.angle = theta[s.param_id];
            apply_gate(state, g);
        } else {
            apply_gate(state, s.gate);
        }
    }
    return state;
}

namespace {

using nlohmann::json;

json mat2_to_json(const Mat2& m) {
    json a = json::array();
    for (const cplx& c : m) {
        a.push_back(c.real());
        a.push_back(c.imag());
    }
    return a;
}

Mat2 mat2_from_json(const json& a) {
    if (!a.is_array() || a.size() != 8) {
        throw_config("circuit json: matrix needs 8 reals");
    }
    Mat2 m;
    for (int i = 0; i < 4; ++i) {
        m[i] = cplx{a[2 * i].get<double>(), a[2 * i + 1].get<double>()};
    }
    return m;
}

const char* kind_name(GateKind k) {
    switch (k) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::Fixed1Q: return "Fixed1Q";
    }
    return "?";
}

GateKind kind_from_name(const std::string& s) {
    if (s == "RX") return GateKind::RX;
    if (s == "RY") return GateKind::RY;
    if (s == "RZ") return GateKind::RZ;
    if (s == "CNOT") return GateKind::CNOT;
    if (s == "CZ") return GateKind::CZ;
    if (s == "Fixed1Q") return GateKind::Fixed1Q;
    throw_config("circuit json: unknown gate kind '" + s + "'");
}

} // namespace

std::string circuit_to_json(const CircuitSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    j["n_qubits"] = spec.n_qubits;
    j["layers"] = spec.layers;
    j["slots_per_qubit"] = spec.slots_per_qubit;
    j["grid_width"] = spec.grid_width;
    json slots = json::array();
    for (const Slot& s : spec.slots) {
        json e;
        e["kind"] = kind_name(s.gate.kind);
        e["target"] = s.gate.target;
        if (s.gate.control >= 0) e["control"] = s.gate.control;
        if (s.tunable()) {
            e["param"] = s.param_id;
        } else if (s.gate.kind == GateKind::Fixed1Q) {
            e["matrix"] = mat2_to_json(s.gate.matrix);
        } else if (s.gate.kind == GateKind::RX || s.gate.kind == GateKind::RY ||
                   s.gate.kind == GateKind::RZ) {
            e["angle"] = s.gate.angle;
        }
        slots.push_back(std::move(e));
    }
    j["slots"] = std::move(slots);
    if (!spec.twirl.empty()) {
        json tw = json::array();
        for (const Mat2& m : spec.twirl) tw.push_back(mat2_to_json(m));
        j["twirl"] = std::move(tw);
    }
    return j.dump();
}

CircuitSpec circuit_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw_config(std::string("circuit json: ") + e.what());
    }
    CircuitSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.n_qubits = j.at("n_qubits").get<int>();
    spec.layers = j.at("layers").get<int>();
    spec.slots_per_qubit = j.at("slots_per_qubit").get<int>();
    spec.grid_width = j.at("grid_width").get<int>();
    for (const json& e : j.at("slots")) {
        Slot s;
        s.gate.kind = kind_from_name(e.at("kind").get<std::string>());
        s.gate.target = e.at("target").get<int>();
        if (e.contains("control")) s.gate.control = e.at("control").get<int>();
        if (e.contains("param")) s.param_id = e.at("param").get<int>();
        if (e.contains("angle")) s.gate.angle = e.at("angle").get<double>();
        if (e.contains("matrix")) s.gate.matrix = mat2_from_json(e.at("matrix"));
        spec.slots.push_back(std::move(s));
    }
    if (j.contains("twirl")) {
        for (const json& m : j.at("twirl")) {
            spec.twirl.push_back(mat2_from_json(m));
        }
    }
    if (spec.family == Family::UNSTRUCTURED) {
        spec.coords.resize(spec.grid_width);
        for (int i = 0; i < spec.grid_width; ++i) spec.coords[i] = {0, 0, i};
    } else {
        fill_coords(spec);
    }
    return spec;
}

} // namespace titan
