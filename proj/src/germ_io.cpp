#include "germforge/germ_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace germforge {

ParseError::ParseError(const std::string& message, int line, int column)
    : UsageError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

SchemaError::SchemaError(const std::string& field_path, const std::string& message)
    : UsageError("schema error at " + field_path + ": " + message), field_path_(field_path) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
    bool decimal = false;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            const char ch = text_[pos_];
            const int line = line_, col = col_;
            if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
                out.push_back(number(line, col));
            } else if (std::isalpha(static_cast<unsigned char>(ch))) {
                std::string id;
                while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) id += advance();
                out.push_back({Tok::Ident, id, line, col});
            } else {
                advance();
                switch (ch) {
                    case '+': out.push_back({Tok::Plus, "+", line, col}); break;
                    case '-': out.push_back({Tok::Minus, "-", line, col}); break;
                    case '*': out.push_back({Tok::Star, "*", line, col}); break;
                    case '^': out.push_back({Tok::Caret, "^", line, col}); break;
                    case '(': out.push_back({Tok::LParen, "(", line, col}); break;
                    case ')': out.push_back({Tok::RParen, ")", line, col}); break;
                    default: throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
                }
            }
        }
    }

private:
    char advance() {
        const char ch = text_[pos_++];
        if (ch == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return ch;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }

    bool digit_at(std::size_t p) const { return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])); }

    Token number(int line, int col) {
        Token t{Tok::Number, "", line, col};
        while (digit_at(pos_)) t.text += advance();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            t.decimal = true;
            t.text += advance();
            while (digit_at(pos_)) t.text += advance();
            if (t.text == ".") throw ParseError("malformed number", line, col);
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (digit_at(look)) {
                t.decimal = true;
                while (pos_ < look) t.text += advance();
                while (digit_at(pos_)) t.text += advance();
            }
        }
        // p/q rational literal: the slash must be followed directly by digits
        if (!t.decimal && pos_ < text_.size() && text_[pos_] == '/') {
            if (!digit_at(pos_ + 1)) throw ParseError("rational literal needs a denominator", line_, col_);
            t.text += advance();
            while (digit_at(pos_)) t.text += advance();
        }
        return t;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, const VariableNames& vars, int order, ScalarMode mode)
        : toks_(std::move(tokens)), vars_(vars), order_(order), mode_(mode) {}

    Jet2 parse() {
        Jet2 result = expr();
        if (peek().kind != Tok::End) fail("unexpected token '" + peek().text + "'");
        return result;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }

    Jet2 expr() {
        Jet2 acc = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool minus = take().kind == Tok::Minus;
            Jet2 rhs = term();
            acc = minus ? subtract(acc, rhs) : add(acc, rhs);
        }
        return acc;
    }

    Jet2 term() {
        Jet2 acc = factor();
        while (peek().kind == Tok::Star) {
            take();
            acc = mul(acc, factor());
        }
        return acc;
    }

    // Unary minus binds looser than '^', so -u^2 reads as -(u^2).
    Jet2 factor() {
        if (peek().kind == Tok::Minus) {
            take();
            return -factor();
        }
        Jet2 b = base();
        if (peek().kind == Tok::Caret) {
            take();
            const Token& t = peek();
            if (t.kind != Tok::Number || t.decimal || t.text.find('/') != std::string::npos)
                fail("exponent must be a nonnegative integer");
            take();
            int e = 0;
            try {
                e = std::stoi(t.text);
            } catch (const std::exception&) {
                throw ParseError("exponent out of range", t.line, t.column);
            }
            b = power(b, e);
        }
        return b;
    }

    Jet2 base() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: {
                take();
                Scalar value;
                try {
                    value = Scalar::parse(t.text);
                } catch (const UsageError& e) {
                    throw ParseError(e.what(), t.line, t.column);
                }
                return Jet2::constant(value, order_, mode_);
            }
            case Tok::Ident: {
                take();
                if (t.text == vars_[0]) return Jet2::variable(Var::U, order_, mode_);
                if (t.text == vars_[1]) return Jet2::variable(Var::V, order_, mode_);
                throw ParseError("unknown identifier '" + t.text + "'", t.line, t.column);
            }
            case Tok::LParen: {
                take();
                Jet2 inner = expr();
                if (peek().kind != Tok::RParen) fail("expected ')'");
                take();
                return inner;
            }
            case Tok::Minus:
                take();
                return -base();
            case Tok::End: fail("unexpected end of input");
            default: fail("unexpected token '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const VariableNames& vars_;
    int order_;
    ScalarMode mode_;
};

void check_identifier(const std::string& name, const std::string& field) {
    const bool ok = !name.empty() && std::isalpha(static_cast<unsigned char>(name[0])) &&
                    std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
    if (!ok) throw SchemaError(field, "variable names must be ASCII alphanumeric starting with a letter");
}

}  // namespace

bool has_decimal_literal(const std::string& text) {
    for (const Token& t : Lexer(text).run())
        if (t.kind == Tok::Number && t.decimal) return true;
    return false;
}

Jet2 parse_polynomial(const std::string& text, const VariableNames& variables, int order, ScalarMode requested) {
    if (order < 0) throw UsageError("jet order must be nonnegative");
    std::vector<Token> tokens = Lexer(text).run();
    bool decimal = false;
    for (const Token& t : tokens) decimal |= t.kind == Tok::Number && t.decimal;
    const ScalarMode mode = decimal ? ScalarMode::Float : requested;
    return Parser(std::move(tokens), variables, order, mode).parse();
}

GermSpec germ_spec_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("/", "germ file must be a JSON object");
    GermSpec spec;
    if (j.contains("variables")) {
        const Json& vars = j.at("variables");
        if (!vars.is_array() || vars.size() != 2) throw SchemaError("/variables", "expected an array of 2 names");
        for (std::size_t k = 0; k < 2; ++k) {
            const std::string field = "/variables/" + std::to_string(k);
            if (!vars[k].is_string()) throw SchemaError(field, "expected a string");
            spec.variables[k] = vars[k].get<std::string>();
            check_identifier(spec.variables[k], field);
        }
        if (spec.variables[0] == spec.variables[1]) throw SchemaError("/variables", "variable names must differ");
    }
    if (!j.contains("components")) throw SchemaError("/components", "missing required field");
    const Json& comps = j.at("components");
    if (!comps.is_array() || comps.size() != 3) throw SchemaError("/components", "expected an array of 3 expressions");
    for (std::size_t k = 0; k < 3; ++k) {
        if (!comps[k].is_string()) throw SchemaError("/components/" + std::to_string(k), "expected a string");
        spec.components[k] = comps[k].get<std::string>();
    }
    if (j.contains("order")) {
        const Json& o = j.at("order");
        if (!o.is_number_integer() || o.get<long>() < 1 || o.get<long>() > 64)
            throw SchemaError("/order", "expected an integer in [1, 64]");
        spec.order = o.get<int>();
    }
    if (j.contains("mode")) {
        const Json& m = j.at("mode");
        if (!m.is_string()) throw SchemaError("/mode", "expected \"exact\" or \"float\"");
        try {
            spec.mode = scalar_mode_from_string(m.get<std::string>());
        } catch (const UsageError&) {
            throw SchemaError("/mode", "expected \"exact\" or \"float\"");
        }
    }
    return spec;
}

Json to_json(const GermSpec& spec) {
    return Json{{"variables", spec.variables}, {"components", spec.components}, {"order", spec.order}, {"mode", to_string(spec.mode)}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError("/", std::string("malformed JSON: ") + e.what());
    }
}

GermSpec load_germ_spec(const std::filesystem::path& path) { return germ_spec_from_json(read_json_file(path)); }

GermJets germ_from_spec(const GermSpec& spec, std::optional<int> order_override) {
    const int order = order_override.value_or(spec.order);
    bool decimal = spec.mode == ScalarMode::Float;
    for (const auto& c : spec.components) decimal |= has_decimal_literal(c);
    const ScalarMode mode = decimal ? ScalarMode::Float : ScalarMode::Exact;
    std::array<Jet2, 3> jets;
    for (std::size_t k = 0; k < 3; ++k) {
        try {
            jets[k] = parse_polynomial(spec.components[k], spec.variables, order, mode).in_mode(mode);
        } catch (const ParseError& e) {
            throw SchemaError("/components/" + std::to_string(k), e.what());
        }
        if (!jets[k].constant_term().is_zero())
            throw SchemaError("/components/" + std::to_string(k), "component must vanish at the origin");
    }
    return GermJets(jets[0], jets[1], jets[2]);
}

GermJets load_germ(const std::filesystem::path& path) { return germ_from_spec(load_germ_spec(path)); }

Json number_json(const Scalar& s) { return s.to_string(); }

Json number_json(double d) { return Scalar(d).to_string(); }

Json to_json(const Report& report) {
    Json j;
    j["class"] = report.klass;
    j["normal_form"] = report.normal_form;
    j["geometry"] = report.geometry;
    j["distance"] = report.distance;
    j["focal_locus"] = report.focal_locus;
    j["warnings"] = report.warnings;
    return j;
}

Report report_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("/", "report must be a JSON object");
    Report r;
    for (const char* key : {"class", "normal_form", "geometry", "distance", "focal_locus", "warnings"})
        if (!j.contains(key)) throw SchemaError(std::string("/") + key, "missing required field");
    r.klass = j.at("class");
    r.normal_form = j.at("normal_form");
    r.geometry = j.at("geometry");
    r.distance = j.at("distance");
    r.focal_locus = j.at("focal_locus");
    const Json& w = j.at("warnings");
    if (!w.is_array()) throw SchemaError("/warnings", "expected an array of strings");
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!w[k].is_string()) throw SchemaError("/warnings/" + std::to_string(k), "expected a string");
        r.warnings.push_back(w[k].get<std::string>());
    }
    return r;
}

void emit_report(const Report& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << to_json(report).dump(2) << '\n';
}

Report load_report(const std::filesystem::path& path) { return report_from_json(read_json_file(path)); }

std::string mesh_to_string(const Mesh& mesh, MeshFormat format) {
    std::ostringstream os;
    char buf[128];
    if (format == MeshFormat::Csv) os << "x,y,z\n";
    for (const Vec3& p : mesh.vertices) {
        if (format == MeshFormat::Obj)
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p[0], p[1], p[2]);
        os << buf;
    }
    if (format == MeshFormat::Obj)
        for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    return os.str();
}

void emit_mesh(const Mesh& mesh, const std::filesystem::path& path, MeshFormat format) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path.string() + "'");
    out << mesh_to_string(mesh, format);
}

}  // namespace germforge
