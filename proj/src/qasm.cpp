// Copyright 2026 The stvqc Authors
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

#include "stvqc/qasm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "stvqc/common.hpp"

namespace stvqc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string angle_expr(const Angle &a) {
    if (!a.index) {
        return fmt_double(a.offset);
    }
    std::string s;
    if (a.scale != 1.0) {
        s += fmt_double(a.scale) + "*";
    }
    s += "theta[" + std::to_string(*a.index) + "]";
    if (a.offset != 0.0) {
        s += (a.offset > 0 ? "+" : "") + fmt_double(a.offset);
    }
    return s;
}

// Affine value c + s*theta[k] produced by the expression parser.
struct Affine {
    std::optional<uint32_t> index;
    double scale = 0.0;
    double offset = 0.0;
};

class ExprParser {
   public:
    ExprParser(std::string_view text, size_t line) : s_(text), line_(line) {}

    Affine parse() {
        Affine v = sum();
        skip_ws();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(s_.substr(pos_)) + "'");
        }
        return v;
    }

   private:
    [[noreturn]] void fail(const std::string &msg) const {
        throw Error("qasm line " + std::to_string(line_) + ": angle expression: " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Affine add(Affine a, const Affine &b, double sign) {
        if (a.index && b.index && *a.index != *b.index) {
            fail("mixes two different parameters");
        }
        if (!a.index) {
            a.index = b.index;
        }
        a.scale += sign * b.scale;
        a.offset += sign * b.offset;
        return a;
    }

    Affine sum() {
        Affine v = product();
        while (true) {
            if (eat('+')) {
                v = add(v, product(), 1.0);
            } else if (eat('-')) {
                v = add(v, product(), -1.0);
            } else {
                return v;
            }
        }
    }

    Affine product() {
        Affine v = unary();
        while (true) {
            if (eat('*')) {
                Affine r = unary();
                if (v.index && r.index) {
                    fail("product of parameters is not affine");
                }
                if (r.index) {
                    std::swap(v, r);
                }
                v.scale *= r.offset;
                v.offset *= r.offset;
            } else if (eat('/')) {
                Affine r = unary();
                if (r.index) {
                    fail("division by a parameter");
                }
                if (r.offset == 0.0) {
                    fail("division by zero");
                }
                v.scale /= r.offset;
                v.offset /= r.offset;
            } else {
                return v;
            }
        }
    }

    Affine unary() {
        if (eat('-')) {
            Affine v = unary();
            v.scale = -v.scale;
            v.offset = -v.offset;
            return v;
        }
        if (eat('+')) {
            return unary();
        }
        return atom();
    }

    Affine atom() {
        skip_ws();
        if (eat('(')) {
            Affine v = sum();
            if (!eat(')')) {
                fail("missing ')'");
            }
            return v;
        }
        if (s_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return Affine{std::nullopt, 0.0, kPi};
        }
        if (s_.substr(pos_, 5) == "theta") {
            pos_ += 5;
            if (!eat('[')) {
                fail("expected '[' after theta");
            }
            skip_ws();
            size_t end = pos_;
            while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) {
                ++end;
            }
            if (end == pos_) {
                fail("expected parameter index");
            }
            const auto idx = static_cast<uint32_t>(std::stoul(std::string(s_.substr(pos_, end - pos_))));
            pos_ = end;
            if (!eat(']')) {
                fail("expected ']'");
            }
            return Affine{idx, 1.0, 0.0};
        }
        const std::string rest(s_.substr(pos_));
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(rest, &used);
        } catch (const std::exception &) {
            fail("expected a number near '" + rest + "'");
        }
        pos_ += used;
        return Affine{std::nullopt, 0.0, v};
    }

    std::string_view s_;
    size_t line_;
    size_t pos_ = 0;
};

std::string trim(std::string_view s) {
    size_t a = 0;
    size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

uint32_t parse_qubit_ref(const std::string &tok, size_t line) {
    const auto lb = tok.find('[');
    const auto rb = tok.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
        throw Error("qasm line " + std::to_string(line) + ": bad qubit reference '" + tok + "'");
    }
    return static_cast<uint32_t>(std::stoul(tok.substr(lb + 1, rb - lb - 1)));
}

}  // namespace

std::string to_qasm(const Circuit &circuit) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out << "// params " << circuit.n_params() << "\n";
    out << "qreg q[" << circuit.n_qubits() << "];\n";
    for (const auto &op : circuit.ops()) {
        out << gate_name(op.kind);
        if (is_parameterized(op.kind)) {
            out << "(" << angle_expr(op.angle) << ")";
        }
        out << " q[" << op.qubits[0] << "]";
        if (op.arity() == 2) {
            out << ",q[" << op.qubits[1] << "]";
        }
        out << ";\n";
    }
    return out.str();
}

Circuit from_qasm(std::string_view text) {
    Circuit c;
    bool have_qreg = false;
    uint32_t declared_params = 0;
    std::string statement;
    size_t line = 1;
    size_t stmt_line = 1;

    auto handle = [&](const std::string &raw) {
        const std::string st = trim(raw);
        if (st.empty()) {
            return;
        }
        auto starts = [&](std::string_view p) { return st.rfind(p, 0) == 0; };
        if (starts("OPENQASM") || starts("include") || starts("creg") || starts("measure") || starts("barrier")) {
            return;
        }
        if (starts("qreg")) {
            if (have_qreg) {
                throw Error("qasm line " + std::to_string(stmt_line) + ": only one qreg is supported");
            }
            c.set_n_qubits(parse_qubit_ref(st, stmt_line));
            have_qreg = true;
            return;
        }
        if (!have_qreg) {
            throw Error("qasm line " + std::to_string(stmt_line) + ": gate before qreg declaration");
        }
        size_t name_end = 0;
        while (name_end < st.size() && (std::isalnum(static_cast<unsigned char>(st[name_end])))) {
            ++name_end;
        }
        const std::string name = st.substr(0, name_end);
        const auto kind = gate_from_name(name);
        if (!kind) {
            throw Error("qasm line " + std::to_string(stmt_line) + ": unsupported gate '" + name + "'");
        }
        size_t pos = name_end;
        Angle angle;
        if (pos < st.size() && st[pos] == '(') {
            int depth = 0;
            size_t close = pos;
            for (; close < st.size(); ++close) {
                if (st[close] == '(') {
                    ++depth;
                } else if (st[close] == ')' && --depth == 0) {
                    break;
                }
            }
            if (close == st.size()) {
                throw Error("qasm line " + std::to_string(stmt_line) + ": unbalanced parentheses");
            }
            const Affine a = ExprParser(std::string_view(st).substr(pos + 1, close - pos - 1), stmt_line).parse();
            angle = a.index ? Angle::param(*a.index, a.scale, a.offset) : Angle::fixed(a.offset);
            pos = close + 1;
        } else if (is_parameterized(*kind)) {
            throw Error("qasm line " + std::to_string(stmt_line) + ": gate '" + name + "' needs an angle");
        }
        std::vector<uint32_t> qubits;
        std::stringstream args(st.substr(pos));
        std::string tok;
        while (std::getline(args, tok, ',')) {
            qubits.push_back(parse_qubit_ref(trim(tok), stmt_line));
        }
        const size_t want = is_two_qubit(*kind) ? 2 : 1;
        if (qubits.size() != want) {
            throw Error("qasm line " + std::to_string(stmt_line) + ": gate '" + name + "' takes " +
                        std::to_string(want) + " qubit(s)");
        }
        try {
            if (want == 1) {
                c.add(*kind, qubits[0], angle);
            } else {
                c.add(*kind, qubits[0], qubits[1], angle);
            }
        } catch (const Error &e) {
            throw Error("qasm line " + std::to_string(stmt_line) + ": " + e.what());
        }
    };

    for (size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            size_t end = text.find('\n', i);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            const std::string comment = trim(text.substr(i + 2, end - i - 2));
            if (comment.rfind("params ", 0) == 0) {
                declared_params = static_cast<uint32_t>(std::stoul(comment.substr(7)));
            }
            i = end - 1;
            continue;
        }
        if (ch == '\n') {
            ++line;
        }
        if (ch == ';') {
            handle(statement);
            statement.clear();
            stmt_line = line;
            continue;
        }
        if (statement.empty() && std::isspace(static_cast<unsigned char>(ch))) {
            stmt_line = line;
            continue;
        }
        statement.push_back(ch);
    }
    if (!trim(statement).empty()) {
        throw Error("qasm: trailing statement without ';'");
    }
    if (!have_qreg) {
        throw Error("qasm: no qreg declaration");
    }
    if (declared_params > c.n_params()) {
        c.set_n_params(declared_params);
    }
    return c;
}

Circuit read_qasm_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open circuit file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_qasm(ss.str());
}

void write_qasm_file(const std::string &path, const Circuit &circuit) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << to_qasm(circuit);
}

void write_distribution_csv(std::ostream &out, std::span<const double> probs) {
    out << "basis_index,probability\n";
    for (size_t i = 0; i < probs.size(); ++i) {
        out << i << "," << fmt_double(probs[i]) << "\n";
    }
}

}  // namespace stvqc
