// Copyright 2026 The AIQT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aiqt/qasm.hpp"

#include "aiqt/error.hpp"
#include "aiqt/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace aiqt {

namespace {

std::string angle(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

} // namespace

std::string emit_qasm(const TransformModel &m) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\n";
    out << "include \"qelib1.inc\";\n";
    out << "// trainable transform: qubits=" << m.qubits()
        << " depth=" << m.depth() << "\n";
    out << "// qubit b carries bit b of the amplitude index\n";
    out << "qreg q[" << m.qubits() << "];\n";
    const QuantumCircuit c = model_circuit(m);
    const std::size_t per_block = m.qubits() + m.qubits() * (m.qubits() - 1) / 2;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate &g = c.gates[i];
        if (i % per_block == 0 && i / per_block < m.depth()) {
            out << "// block " << i / per_block << "\n";
        } else if (i == m.depth() * per_block) {
            out << "// output qubit reversal\n";
        }
        switch (g.kind) {
        case GateKind::U3:
            out << "u3(" << angle(g.a) << "," << angle(g.b) << "," << angle(g.c)
                << ") q[" << g.q0 << "];\n";
            break;
        case GateKind::ControlledPhase:
            out << "cu1(" << angle(g.a) << ") q[" << g.q0 << "],q[" << g.q1
                << "];\n";
            break;
        case GateKind::Swap:
            out << "swap q[" << g.q0 << "],q[" << g.q1 << "];\n";
            break;
        }
    }
    return out.str();
}

namespace {

// Recursive-descent reader over one statement at a time.
class Reader {
  public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[nodiscard]] bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_.substr(pos_, 2) == "//") {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    [[nodiscard]] std::optional<char> peek() {
        skip_space();
        if (pos_ >= text_.size()) {
            return std::nullopt;
        }
        return text_[pos_];
    }

    void expect(char c) {
        if (peek() != c) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string identifier() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected identifier");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string quoted() {
        expect('"');
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            ++pos_;
        }
        if (pos_ >= text_.size()) {
            fail("unterminated string");
        }
        return std::string(text_.substr(start, pos_++ - start));
    }

    double number() {
        skip_space();
        const char *begin = text_.data() + pos_;
        char *end = nullptr;
        const std::string tail(begin, text_.size() - pos_);
        const double v = std::strtod(tail.c_str(), &end);
        const auto used = static_cast<std::size_t>(end - tail.c_str());
        if (used == 0) {
            fail("expected number");
        }
        pos_ += used;
        return v;
    }

    std::size_t integer() {
        const double v = number();
        if (v < 0 || v != std::floor(v)) {
            fail("expected non-negative integer");
        }
        return static_cast<std::size_t>(v);
    }

    // expr := term (('+'|'-') term)*
    double expression() {
        double v = term();
        for (;;) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    [[noreturn]] void fail(const std::string &what) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            line += text_[i] == '\n';
        }
        throw IoError("qasm line " + std::to_string(line) + ": " + what);
    }

  private:
    double term() {
        double v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                v /= factor();
            } else {
                return v;
            }
        }
    }

    double factor() {
        if (accept('-')) {
            return -factor();
        }
        if (accept('+')) {
            return factor();
        }
        if (accept('(')) {
            const double v = expression();
            expect(')');
            return v;
        }
        const auto c = peek();
        if (c && std::isalpha(static_cast<unsigned char>(*c))) {
            const std::string id = identifier();
            if (id != "pi") {
                fail("unknown symbol '" + id + "'");
            }
            return std::numbers::pi;
        }
        return number();
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

QuantumCircuit parse_qasm(std::string_view text) {
    Reader r(text);
    QuantumCircuit circuit;
    std::string reg;
    bool have_header = false;

    auto qubit_arg = [&]() {
        const std::string name = r.identifier();
        if (reg.empty() || name != reg) {
            r.fail("unknown register '" + name + "'");
        }
        r.expect('[');
        const std::size_t index = r.integer();
        r.expect(']');
        if (index >= circuit.qubits) {
            r.fail("qubit index out of range");
        }
        return index;
    };
    auto params = [&](std::size_t count) {
        std::vector<double> values;
        r.expect('(');
        for (std::size_t i = 0; i < count; ++i) {
            if (i > 0) {
                r.expect(',');
            }
            values.push_back(r.expression());
        }
        r.expect(')');
        return values;
    };

    while (!r.at_end()) {
        const std::string word = r.identifier();
        if (word == "OPENQASM") {
            const double version = r.number();
            if (version != 2.0) {
                r.fail("only OpenQASM 2.0 is supported");
            }
            have_header = true;
        } else if (!have_header) {
            r.fail("missing OPENQASM header");
        } else if (word == "include") {
            (void)r.quoted();
        } else if (word == "qreg") {
            if (!reg.empty()) {
                r.fail("only one quantum register is supported");
            }
            reg = r.identifier();
            r.expect('[');
            circuit.qubits = r.integer();
            r.expect(']');
        } else if (word == "creg") {
            (void)r.identifier();
            r.expect('[');
            (void)r.integer();
            r.expect(']');
        } else if (word == "u3") {
            const auto p = params(3);
            circuit.gates.push_back(Gate::u3(qubit_arg(), p[0], p[1], p[2]));
        } else if (word == "u1") {
            const auto p = params(1);
            circuit.gates.push_back(Gate::u3(qubit_arg(), 0.0, 0.0, p[0]));
        } else if (word == "h") {
            circuit.gates.push_back(
                Gate::u3(qubit_arg(), std::numbers::pi / 2.0, 0.0,
                         std::numbers::pi));
        } else if (word == "cu1" || word == "cp") {
            const auto p = params(1);
            const std::size_t a = qubit_arg();
            r.expect(',');
            const std::size_t b = qubit_arg();
            circuit.gates.push_back(Gate::cphase(a, b, p[0]));
        } else if (word == "swap") {
            const std::size_t a = qubit_arg();
            r.expect(',');
            const std::size_t b = qubit_arg();
            circuit.gates.push_back(Gate::swap(a, b));
        } else {
            r.fail("unsupported statement '" + word + "'");
        }
        r.expect(';');
    }
    if (!have_header) {
        r.fail("missing OPENQASM header");
    }
    if (circuit.qubits == 0) {
        r.fail("no quantum register declared");
    }
    return circuit;
}

double qasm_deviation(std::string_view text, const TransformModel &m) {
    const QuantumCircuit parsed = parse_qasm(text);
    if (parsed.qubits != m.qubits()) {
        throw Error("qasm register size does not match the model");
    }
    const DenseMatrix from_file = circuit_unitary(parsed);
    const DenseMatrix expected = dense_matrix(m);
    return (from_file - expected).cwiseAbs().maxCoeff();
}

void export_qasm(const TransformModel &m, const std::filesystem::path &path,
                 double tolerance) {
    const std::string text = emit_qasm(m);
    const double deviation = qasm_deviation(text, m);
    if (!(deviation <= tolerance)) {
        throw Error("qasm verification failed: deviation " +
                    std::to_string(deviation));
    }
    write_file_atomic(path, text);
}

} // namespace aiqt
