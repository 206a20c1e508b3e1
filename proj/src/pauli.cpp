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

#include "titan/pauli.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace titan {

Hamiltonian Hamiltonian::build(int n_qubits, std::vector<PauliString> terms) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw_config("Hamiltonian: qubit count " + std::to_string(n_qubits) +
                     " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::map<std::map<int, PauliAxis>, double> merged;
    for (const PauliString& t : terms) {
        if (!std::isfinite(t.coefficient)) {
            throw_validation("Hamiltonian: non-finite coefficient");
        }
        for (const auto& [q, axis] : t.factors) {
            (void)axis;
            if (q < 0 || q >= n_qubits) {
                throw_shape("Hamiltonian: factor index " + std::to_string(q) +
                            " out of range for " + std::to_string(n_qubits) +
                            " qubits");
            }
        }
        merged[t.factors] += t.coefficient;
    }

    Hamiltonian h;
    h.n_qubits_ = n_qubits;
    for (const auto& [factors, coeff] : merged) {
        if (coeff == 0.0) continue;
        h.terms_.push_back({factors, coeff});
        CompiledTerm c{0, 0, 0, coeff};
        for (const auto& [q, axis] : factors) {
            const std::uint64_t bit = std::uint64_t{1} << q;
            switch (axis) {
            case PauliAxis::X: c.flip_mask |= bit; break;
            case PauliAxis::Y:
                c.flip_mask |= bit;
                c.phase_mask |= bit;
                ++c.y_count;
                break;
            case PauliAxis::Z: c.phase_mask |= bit; break;
            }
        }
        h.compiled_.push_back(c);
    }
    return h;
}

StateVector Hamiltonian::apply(const StateVector& v) const {
    if (v.n_qubits != n_qubits_) {
        throw_shape("apply_hamiltonian: state has " +
                    std::to_string(v.n_qubits) + " qubits, Hamiltonian has " +
                    std::to_string(n_qubits_));
    }
    StateVector out;
    out.n_qubits = v.n_qubits;
    out.amps.assign(v.dim(), cplx{0.0, 0.0});

    // i^k for k = #Y factors mod 4.
    static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

    const std::size_t dim = v.dim();
    for (const CompiledTerm& t : compiled_) {
        const cplx scale = t.coefficient * kIPow[t.y_count & 3];
        for (std::size_t s = 0; s < dim; ++s) {
            const int par = std::popcount(s & t.phase_mask) & 1;
            const cplx w = par ? -scale : scale;
            out.amps[s ^ t.flip_mask] += w * v.amps[s];
        }
    }
    return out;
}

StateVector apply_hamiltonian(const Hamiltonian& h, const StateVector& v) {
    return h.apply(v);
}

double expectation(const StateVector& state, const Hamiltonian& h) {
    const StateVector hv = h.apply(state);
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < state.dim(); ++i) {
        acc += std::conj(state.amps[i]) * hv.amps[i];
    }
    if (std::abs(acc.imag()) >= 1e-10) {
        throw_validation("expectation: imaginary part " +
                         std::to_string(acc.imag()) + " exceeds 1e-10");
    }
    return acc.real();
}

Hamiltonian heisenberg(int n, double a, double b, double c) {
    if (n < 2) throw_config("heisenberg: need at least 2 qubits");
    std::vector<PauliString> terms;
    for (int i = 0; i + 1 < n; ++i) {
        terms.push_back({{{i, PauliAxis::X}, {i + 1, PauliAxis::X}}, a});
        terms.push_back({{{i, PauliAxis::Y}, {i + 1, PauliAxis::Y}}, b});
        terms.push_back({{{i, PauliAxis::Z}, {i + 1, PauliAxis::Z}}, c});
    }
    return Hamiltonian::build(n, std::move(terms));
}

Hamiltonian tfim(int n, double J, double h) {
    if (n < 2) throw_config("tfim: need at least 2 qubits");
    std::vector<PauliString> terms;
    for (int i = 0; i + 1 < n; ++i) {
        terms.push_back({{{i, PauliAxis::Z}, {i + 1, PauliAxis::Z}}, J});
    }
    for (int i = 0; i < n; ++i) {
        terms.push_back({{{i, PauliAxis::X}}, h});
    }
    return Hamiltonian::build(n, std::move(terms));
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& msg) {
    throw Error(ErrorKind::Config,
                "pauli file, line " + std::to_string(line_no) + ": " + msg);
}

} // namespace

Hamiltonian parse_pauli_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool seen_term = false;
    int header_qubits = -1;
    int max_index = -1;
    std::vector<PauliString> terms;

    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);

        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank

        if (tok == "qubits") {
            if (seen_term || header_qubits >= 0) {
                parse_fail(line_no, "header must be the first non-comment line");
            }
            if (!(ls >> header_qubits) || header_qubits < 1) {
                parse_fail(line_no, "expected positive qubit count");
            }
            if (ls >> tok) parse_fail(line_no, "trailing token '" + tok + "'");
            continue;
        }

        PauliString term;
        try {
            std::size_t used = 0;
            term.coefficient = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            parse_fail(line_no, "invalid coefficient '" + tok + "'");
        }

        bool any_factor = false;
        while (ls >> tok) {
            any_factor = true;
            if (tok == "I") continue; // identity factor carries no index
            PauliAxis axis;
            switch (tok[0]) {
            case 'X': axis = PauliAxis::X; break;
            case 'Y': axis = PauliAxis::Y; break;
            case 'Z': axis = PauliAxis::Z; break;
            default: parse_fail(line_no, "invalid factor '" + tok + "'");
            }
            int q = -1;
            try {
                std::size_t used = 0;
                q = std::stoi(tok.substr(1), &used);
                if (used != tok.size() - 1 || q < 0) {
                    throw std::invalid_argument(tok);
                }
            } catch (const std::exception&) {
                parse_fail(line_no, "invalid factor '" + tok + "'");
            }
            if (term.factors.count(q)) {
                parse_fail(line_no, "qubit " + std::to_string(q) +
                                        " appears twice in one term");
            }
            term.factors[q] = axis;
            max_index = std::max(max_index, q);
        }
        if (!any_factor) parse_fail(line_no, "term has no factors");
        seen_term = true;
        terms.push_back(std::move(term));
    }

    int n = header_qubits >= 1 ? header_qubits : std::max(max_index + 1, 1);
    if (header_qubits >= 1 && max_index >= header_qubits) {
        throw_config("pauli file: factor index " + std::to_string(max_index) +
                     " exceeds declared qubit count " +
                     std::to_string(header_qubits));
    }
    return Hamiltonian::build(n, std::move(terms));
}

Hamiltonian from_pauli_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw_config("cannot open pauli file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_pauli_text(buf.str());
}

} // namespace titan
