#include "germforge/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace germforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// The coefficients the printed forms are written in, gathered once per angle.
struct Inputs {
    int n;
    double eps;
    double c, s, t, ma;
    double f, f2;  // (n+1)!, (n+2)!
    double a, a2, a3;  // a_{n+1,1}, a_{n+2,1}, a_{n+3,1}
    double a20, a30, a40, a12, a22, a21, a03;
    double b2, b3, b4;
    double d32;  // (n+3)(n+2)
    double n2;   // n+2

    double p(double x, int k) const { return std::pow(x, k); }
};

Inputs inputs(const BlowupContext& ctx, double theta) {
    Inputs in{};
    in.n = ctx.n();
    in.eps = ctx.epsilon();
    in.c = std::cos(theta);
    in.s = std::sin(theta);
    in.t = in.s / in.c;
    in.ma = ctx.ma(theta);
    in.f = ctx.fact();
    in.f2 = in.f * (in.n + 2);
    in.a = ctx.lead();
    in.a2 = ctx.a(in.n + 2, 1);
    in.a3 = ctx.a(in.n + 3, 1);
    in.a20 = ctx.a(2, 0);
    in.a30 = ctx.a(3, 0);
    in.a40 = ctx.a(4, 0);
    in.a12 = ctx.a(1, 2);
    in.a22 = ctx.a(2, 2);
    in.a21 = ctx.a(2, 1);
    in.a03 = ctx.a(0, 3);
    in.b2 = ctx.b(2);
    in.b3 = ctx.b(3);
    in.b4 = ctx.b(4);
    in.n2 = in.n + 2;
    in.d32 = (in.n + 3) * in.n2;
    return in;
}

double n21(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    return -f * f * (a2 * c + f2 * a12 * s) * c * s * s / (n2 * q.p(ma, 3));
}

double n31(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    return -f * a * (a2 * c + f2 * a12 * s) * c * c * s / (n2 * q.p(ma, 3));
}

double n22(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double bracket =
        q.p(a, 5) * b2 * b2 * q.p(c, 5) / 2 - f * q.p(a, 4) * a20 * b2 * q.p(c, 4) * s -
        f * f * a * (a3 * a / d32 - 3 * a2 * a2 / (2 * n2 * n2) - a * a * (a20 * a20 + b2 * b2) / 2) * q.p(c, 3) * s * s +
        q.p(f, 3) * a * (a2 * a12 / n2 - a * (a20 * b2 - a22) / 2) * c * c * q.p(s, 3) -
        q.p(f, 4) * (a3 / d32 - a * (3 * a12 * a12 + a20 * a20) / 2) * c * q.p(s, 4) - q.p(f, 5) * a22 / 2 * q.p(s, 5);
    return bracket * c * c / q.p(ma, 5) - eps * 4 * a03 * (a21 * a21 * c * c + 4 * s * s) * c * q.p(s, 4) / q.p(ma, 5);
}

double n32(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double bracket =
        -f * a * a * (a3 * a / d32 - a2 * a2 / (n2 * n2) + a * a * b2 / 2) * q.p(c, 4) +
        f * f * a * a * (2 * a2 * a12 / n2 + a * (2 * a20 * b2 - a22) / 2) * q.p(c, 3) * s -
        q.p(f, 3) * (a3 * a / d32 + a2 * a2 / (2 * n2 * n2) - a * a * (2 * a12 * a12 - a20 * a20 - b2 * b2) / 2) * c * c * s * s -
        q.p(f, 4) * (a2 * a12 / n2 - a * (2 * a20 * b2 - a22) / 2) * c * q.p(s, 3) -
        q.p(f, 5) * (a12 * a12 + q.p(a20, 3)) * q.p(s, 4) / 2;
    return bracket * c * c * s / q.p(ma, 5) - 2 * a21 * a03 * (a21 * a21 * c * c + 4 * s * s) * c * c * q.p(s, 3) / q.p(ma, 5);
}

double L1(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double bracket = a2 * a * a20 * c * c + f * (n2 * a * a12 * a20 + a2 * b2) * c * s + n2 * f * f * a12 * b2 * s * s;
    return (-a * b3 * c + f * a30 * s) * c / ma + f / (n2 * q.p(ma, 3)) * bracket * c * s;
}

double M1(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    return (a2 * c + f * a12 * s) / ma - (n + 1) * a * a / (n2 * q.p(ma, 3)) * (a2 * c + f2 * a12 * s) * q.p(c, n + 1) * s;
}

double N1(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    return f * a12 * c * s / ma - f * f / (n2 * q.p(ma, 3)) * (a2 * c + f2 * a12 * s) * c * s * s;
}

double L2(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double first = (-a * b4 * c + f * a40 * s) * c * c / (2 * ma);
    const double second = f / q.p(ma, 3) *
                          (a2 * a * a30 / n2 * c * c + f * (a2 * b3 / n2 + a * a30 * a12) * c * s + f * f * a12 * b3 * s * s) * c * c * s;
    const double bracket =
        q.p(a, 5) * q.p(b2, 3) / 2 * q.p(c, 5) -
        f * a * a * a20 / 2 * (2 * a3 * a / d32 - 2 * a2 * a2 / (n2 * n2) + 3 * a * a * b2 * b2) * q.p(c, 4) * s -
        f * f * a *
            (a3 * a * b2 / d32 - 3 * a2 * a2 * b2 / (2 * n2 * n2) - 2 * a2 * a * a12 * a20 / n2 +
             a * a * (a22 * a20 - 3 * a20 * a20 * b2 - q.p(b2, 3)) / 2) *
            q.p(c, 3) * s * s -
        q.p(f, 3) *
            (a3 * a * a20 / d32 + a2 * a2 * a20 / (2 * n2 * n2) - 3 * a2 * a * a12 * b2 / n2 +
             a * a * (a22 * b2 - 2 * a12 * a12 * a20 + q.p(a20, 3) - 3 * a20 * b2 * b2) / 2) *
            c * c * q.p(s, 3) -
        q.p(f, 4) * (a3 * b2 / d32 + a2 * a12 * a20 / n2 + a * (a22 * a20 - 3 * a12 * a12 * b2 - 3 * a20 * a20 * b2) / 2) * c * q.p(s, 4) -
        q.p(f, 5) * (a22 * b2 + a12 * a12 * a20 + q.p(a20, 3)) * q.p(s, 5) / 2;
    const double eps_part =
        2 * a21 * c * s * s / ma -
        2 * a03 / q.p(ma, 5) *
            (q.p(a21, 3) * a20 * q.p(c, 3) + 2 * a21 * a21 * b2 * c * c * s + 4 * a21 * a20 * c * s * s + 8 * b2 * q.p(s, 3)) * c * q.p(s, 3);
    return first - second + bracket * c * c / q.p(ma, 5) + eps * eps_part;
}

double M2(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double first = (a3 * c / n2 + f * a22 * s) * q.p(c, n + 1) * s / ma;
    const double second = a / q.p(ma, 3) *
                          (a2 * a2 * c * c / n2 + (n + 3) * f * a2 * a12 * c * s / n2 + f * f * a12 * a12 * s * s) * q.p(c, n + 2) * s;
    const double bracket =
        a * a * (a3 * a / d32 - a2 * a2 / (n2 * n2) + a * b2 * b2 / 2) * q.p(c, 4) -
        f * a * a * (2 * a2 * a12 / n2 - a * a22 / 2 + a * a20 * b2) * q.p(c, 3) * s +
        f * f * (a3 * a / d32 + a2 * a2 / (2 * n2 * n2) - a * a * (2 * a12 * a12 - a20 * a20 - b2 * b2) / 2) * c * c * s * s +
        q.p(f, 3) * (a2 * a12 / n2 + a * (a22 - 2 * a20 * b2) / 2) * c * q.p(s, 3) +
        q.p(f, 4) * a * (a12 * a12 + a20 * a20) * q.p(s, 4) / 2;
    const double tail = 2 * a21 * a21 * a03 * (a21 * a21 * c * c + 4 * s * s) * q.p(c, 3) * q.p(s, 3) / q.p(ma, 5);
    return first - second - (n + 1) * a / q.p(ma, 5) * bracket * q.p(c, n + 2) * s - tail;
}

double N2(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double first = f * a22 * c * c * s / (2 * ma);
    const double second = f * a * a12 / q.p(ma, 3) * (a2 * c / n2 + f * a12 * s) * q.p(c, 3) * s;
    const double bracket =
        q.p(a, 5) * b2 * b2 * q.p(c, 5) / 2 - f * q.p(a, 4) * a20 * b2 * q.p(c, 4) * s +
        f * f * a * (-a3 * a / d32 + 3 * a2 * a2 / (2 * n2 * n2) + a * a * a20 * a20 / 2 + a * a * b2 * b2 / 2) * q.p(c, 3) * s * s +
        q.p(f, 3) * a * (3 * a2 * a12 / n2 - a * a22 / 2 - a * a20 * b2) * c * c * q.p(s, 3) -
        q.p(f, 4) * (a3 / d32 - 3 * a * a12 * a12 / 2 - a * a20 * a20 / 2) * c * q.p(s, 4) - q.p(f, 5) * a22 * q.p(s, 5) / 2;
    const double eps_part = (2 * a03 * c * s * s / ma - 4 / q.p(ma, 5) * (4 * a03 * s * s + a21 * a21 * a03 * c * c)) * c * q.p(s, 4);
    return first - second + bracket * c * c / q.p(ma, 5) + eps * eps_part;
}

double k11(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double bracket = a2 * a * a20 * c * c / n2 + f * (a * a12 * a20 + a2 * b2 / n2) * c * s + f * f * a12 * b2 * s * s;
    return (-a * b3 * c + f * a30 * s) * c / ma - f / q.p(ma, 3) * bracket * c * s;
}

double k12(const Inputs& q, double theta) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double first =
        (a * (2 * a20 * a20 * b2 + 2 * q.p(b2, 3) - b4) * c - f * (2 * a20 * b2 * b2 + 2 * q.p(a20, 3) - a40) * s) * c * c / (2 * ma);
    const double second = f / q.p(ma, 3) *
                          (a2 * a * a30 * c * c / n2 + f * (a * a30 * a12 + a2 * b3 / n2) * c * s + f * f * a * a30 * a12 * s * s) * c * c * s;
    // the last bracket term carries a bare theta factor as printed
    const double bracket =
        q.p(a, 5) * q.p(b2, 3) * q.p(c, 5) / 2 -
        f * a * a * a20 * (a3 * a / d32 - a2 * a2 / (n2 * n2) + 3 * a * b2 * b2 / 2) * q.p(c, 4) * s -
        f * f * a *
            (a3 * a * b2 / d32 - 3 * a2 * a2 * b2 / (2 * n2 * n2) - 2 * a2 * a * a12 * a20 / n2 -
             a * a * (3 * a20 * a20 * b2 + q.p(b2, 3) - a22 * a20) / 2) *
            q.p(c, 3) * s * s -
        q.p(f, 3) *
            (a3 * a * a20 / d32 - a2 * a2 * a20 / (2 * n2) - 3 * a2 * a * a12 * b2 / n2 -
             a * a * (2 * a12 * a12 * a20 - q.p(a20, 3) - 3 * a20 * b2 * b2 - a22 * b2) / 2) *
            c * c * q.p(s, 3) -
        q.p(f, 4) * (a3 * b2 / d32 + a2 * a12 * a20 / n2 - a * (3 * a12 * a12 * b2 + 3 * a20 * a20 * b2 - a22 * a20) / 2) * c * q.p(s, 4) -
        q.p(f, 5) * (a12 * a12 * a20 + a22 * b2 + q.p(a20, 3)) * theta * q.p(s, 5) / 2;
    const double eps_part =
        6 * a21 * c * s * s / ma -
        a03 / q.p(ma, 5) *
            (q.p(a21, 3) * a20 * q.p(c, 3) + 2 * a21 * a21 * b2 * c * c * s + 4 * a21 * a20 * c * s * s + 8 * b2 * q.p(s, 3)) * c * q.p(s, 3);
    return first - second + bracket * c * c / q.p(ma, 5) + eps * eps_part;
}

double k21(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    return f * f / (n2 * q.p(ma, 5) * q.p(c, 2 * n)) * (2 * a2 * a * a + 3 * f2 * a * a * a12 * t - f * f * a2 * t * t);
}

double xi11(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    return (f2 * a * a * a12 * q.p(c, 4) - a2 * (f * f + a * a) * q.p(c, 3) * s - 2 * f * f * a2 * c * q.p(s, 3) -
            n2 * q.p(f, 3) * a12 * q.p(s, 4)) *
           s / q.p(ma, 3);
}

double eta21(const Inputs& q) {
    const auto& [n, eps, c, s, t, ma, f, f2, a, a2, a3, a20, a30, a40, a12, a22, a21, a03, b2, b3, b4, d32, n2] = q;
    const double first =
        (-a * a * a20 * b2 / f * c * c + (a * (a20 * a20 - b2 * b2) - a3 / n2) * c * s + f * (2 * a20 * b2 + (n + 3) * a22) * s * s / 2) * c * c / ma;
    const double second = a / q.p(ma, 3) * (a2 / n2 * c * c + 2 * f * a2 * a12 * c * s + f2 * f * a12 * a12 * s * s) * q.p(c, 3) * s;
    // the operator opening the third bracket line is missing in print; read as +
    const double bracket = (a3 * a / d32 - a2 * a2 / (n2 * n2)) * q.p(c, 5) +
                           (n + 1) * f * f * q.p(a, 3) * (a * a22 / 2 - 2 * a2 * a12 / n2) * q.p(c, 4) * s +
                           (n + 1) * f * f * a * (2 * a3 * a / d32 - a2 * a2 / (n2 * n2) - a * a * a12 * a12) * q.p(c, 3) * s * s -
                           (n + 1) * q.p(f, 3) * a * (a2 * a12 / n2 - a * a22) * c * c * q.p(s, 3) +
                           (n + 1) * q.p(f, 4) * (a3 / d32 - a * a12 * a12) * c * q.p(s, 4) + (n + 1) * q.p(f, 5) * a22 * q.p(s, 5) / 2;
    return first + second + (n + 1) * q.p(a, 3) / q.p(ma, 5) * bracket * c * c * s - eps * 2 * a03 * c * q.p(s, 3) / ma;
}

bool needs_off_principal(const std::string& symbol) { return symbol == "k11" || symbol == "k12" || symbol == "k21" || symbol == "xi" || symbol == "eta"; }

}  // namespace

const std::vector<std::string>& appendix_symbols() {
    static const std::vector<std::string> symbols{"n21", "n31", "n22", "n32", "L1", "M1", "N1", "L2",
                                                  "M2",  "N2",  "k11", "k12", "k21", "xi", "eta"};
    return symbols;
}

const std::vector<std::string>& appendix_suspected_typos() {
    static const std::vector<std::string> typos{"n22", "n32", "L1", "M1", "L2", "M2", "N2", "k12", "k21", "xi", "eta"};
    return typos;
}

double appendix_closed_form(const BlowupContext& ctx, const std::string& symbol, double theta) {
    if (needs_off_principal(symbol) && std::abs(std::cos(theta)) <= kCosTolerance) return kNaN;
    const Inputs q = inputs(ctx, theta);
    static const std::map<std::string, std::function<double(const Inputs&, double)>> table{
        {"n21", [](const Inputs& x, double) { return n21(x); }}, {"n31", [](const Inputs& x, double) { return n31(x); }},
        {"n22", [](const Inputs& x, double) { return n22(x); }}, {"n32", [](const Inputs& x, double) { return n32(x); }},
        {"L1", [](const Inputs& x, double) { return L1(x); }},   {"M1", [](const Inputs& x, double) { return M1(x); }},
        {"N1", [](const Inputs& x, double) { return N1(x); }},   {"L2", [](const Inputs& x, double) { return L2(x); }},
        {"M2", [](const Inputs& x, double) { return M2(x); }},   {"N2", [](const Inputs& x, double) { return N2(x); }},
        {"k11", [](const Inputs& x, double) { return k11(x); }}, {"k12", [](const Inputs& x, double th) { return k12(x, th); }},
        {"k21", [](const Inputs& x, double) { return k21(x); }}, {"xi", [](const Inputs& x, double) { return xi11(x); }},
        {"eta", [](const Inputs& x, double) { return eta21(x); }},
    };
    const auto it = table.find(symbol);
    if (it == table.end()) throw UsageError("unknown appendix symbol: " + symbol);
    return it->second(q, theta);
}

double appendix_series_value(const BlowupContext& ctx, const std::string& symbol, double theta) {
    if (symbol.size() == 3 && symbol[0] == 'n') {
        const NormalSeries q = extended_normal(ctx, theta);
        return q.n[symbol[1] - '1'][symbol[2] - '0'];
    }
    if (symbol.size() == 2 && (symbol[0] == 'L' || symbol[0] == 'M' || symbol[0] == 'N')) {
        const FormSeries fs = fundamental_forms(ctx, theta);
        const Series& s = symbol[0] == 'L' ? fs.L : symbol[0] == 'M' ? fs.M : fs.N;
        return s[symbol[1] - '0'];
    }
    if (std::abs(std::cos(theta)) <= kCosTolerance) return kNaN;
    const CurvatureSeries cs = curvature_series(ctx, theta);
    if (symbol == "k11") return cs.k11();
    if (symbol == "k12") return cs.k12();
    if (symbol == "k21") return cs.k21();
    if (symbol == "xi") return cs.lifts.xi11;
    if (symbol == "eta") return cs.lifts.eta21;
    throw UsageError("unknown appendix symbol: " + symbol);
}

std::vector<AppendixRow> appendix_crosscheck(const BlowupContext& ctx, const std::vector<double>& thetas) {
    const auto& typos = appendix_suspected_typos();
    std::vector<AppendixRow> rows;
    for (const double theta : thetas) {
        for (const std::string& symbol : appendix_symbols()) {
            const double series = appendix_series_value(ctx, symbol, theta);
            const double closed = appendix_closed_form(ctx, symbol, theta);
            if (std::isnan(series) || std::isnan(closed)) continue;
            AppendixRow row;
            row.symbol = symbol;
            row.theta = theta;
            row.series_value = series;
            row.closed_value = closed;
            row.delta = closed - series;
            row.mismatch = std::abs(row.delta) > 1e-8 * (1.0 + std::abs(series));
            row.suspected_typo = std::find(typos.begin(), typos.end(), symbol) != typos.end();
            rows.push_back(row);
        }
    }
    return rows;
}

Json appendix_json(const std::vector<AppendixRow>& rows) {
    Json out = Json::array();
    for (const AppendixRow& r : rows) {
        Json j;
        j["symbol"] = r.symbol;
        j["theta"] = number_json(r.theta);
        j["series_value"] = number_json(r.series_value);
        j["appendix_value"] = number_json(r.closed_value);
        j["delta"] = number_json(r.delta);
        j["mismatch"] = r.mismatch;
        j["suspected_typo"] = r.suspected_typo;
        out.push_back(j);
    }
    return out;
}

}  // namespace germforge
