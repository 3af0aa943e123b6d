#include "wrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace wrp {

void LinExpr::compress() {
    std::map<Index, double> acc;
    for (const auto& t : terms) acc[t.var] += t.coef;
    terms.clear();
    for (const auto& [v, c] : acc)
        if (c != 0.0) terms.push_back({v, c});
}

Index ConicModel::add_var(const std::string& name, double lb, double ub) {
    names_.push_back(name);
    lb_.push_back(lb);
    ub_.push_back(ub);
    binary_.push_back(false);
    return static_cast<Index>(names_.size()) - 1;
}

Index ConicModel::add_binary(const std::string& name) {
    Index v = add_var(name, 0.0, 1.0);
    binary_[v] = true;
    return v;
}

void ConicModel::add_eq(LinExpr e, const std::string& name) {
    e.compress();
    rows_.push_back({std::move(e), RowKind::Eq, name});
}

void ConicModel::add_le(LinExpr e, const std::string& name) {
    e.compress();
    rows_.push_back({std::move(e), RowKind::Le, name});
}

void ConicModel::add_soc(SocRow row) {
    for (auto& a : row.args) a.compress();
    cones_.push_back(std::move(row));
}

Index ConicModel::num_binaries() const {
    return static_cast<Index>(std::count(binary_.begin(), binary_.end(), true));
}

double ConicModel::max_linear_violation(const Vec& x) const {
    double v = 0.0;
    for (const auto& row : rows_) {
        double val = row.expr.eval(x);
        v = std::max(v, row.kind == RowKind::Eq ? std::abs(val) : val);
    }
    for (Index i = 0; i < num_vars(); ++i) {
        if (std::isfinite(lb_[i])) v = std::max(v, lb_[i] - x[i]);
        if (std::isfinite(ub_[i])) v = std::max(v, x[i] - ub_[i]);
    }
    return v;
}

double ConicModel::max_soc_violation(const Vec& x) const {
    double v = 0.0;
    for (const auto& cone : cones_) {
        double norm2 = 0.0;
        for (std::size_t k = 1; k < cone.args.size(); ++k) {
            double a = cone.args[k].eval(x);
            norm2 += a * a;
        }
        v = std::max(v, std::sqrt(norm2) - cone.args[0].eval(x));
    }
    return v;
}

ConicModel relax(const ConicModel& m) {
    ConicModel out = m;
    for (Index v = 0; v < out.num_vars(); ++v)
        if (out.is_binary(v)) out.clear_binary(v);
    return out;
}

namespace {

std::string fmt(double x) {
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_num(const std::string& s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return std::stod(s);
}

void dump_expr(std::ostringstream& os, const LinExpr& e) {
    os << fmt(e.constant);
    for (const auto& t : e.terms) os << " " << t.var << ":" << fmt(t.coef);
}

LinExpr parse_expr(std::istringstream& is) {
    LinExpr e;
    std::string tok;
    is >> tok;
    e.constant = parse_num(tok);
    while (is >> tok) {
        if (tok == "|" || tok == ";") break;
        auto colon = tok.find(':');
        e.add(std::stoi(tok.substr(0, colon)), parse_num(tok.substr(colon + 1)));
    }
    return e;
}

}  // namespace

std::string dump(const ConicModel& m) {
    std::ostringstream os;
    os << "vars " << m.num_vars() << "\n";
    for (Index v = 0; v < m.num_vars(); ++v) {
        os << "v " << (m.is_binary(v) ? "b" : "c") << " " << fmt(m.lower_bound(v)) << " "
           << fmt(m.upper_bound(v)) << " " << m.var_name(v) << "\n";
    }
    os << "obj ";
    dump_expr(os, m.objective());
    os << "\n";
    for (const auto& row : m.linear_rows()) {
        os << (row.kind == RowKind::Eq ? "eq " : "le ");
        dump_expr(os, row.expr);
        os << " | " << row.name << "\n";
    }
    for (const auto& cone : m.soc_rows()) {
        os << "soc " << cone.args.size();
        for (const auto& a : cone.args) {
            os << " ; ";
            dump_expr(os, a);
        }
        os << " | " << cone.name << "\n";
    }
    return os.str();
}

ConicModel parse_dump(const std::string& text) {
    ConicModel m;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string kw;
        is >> kw;
        if (kw == "vars") continue;
        if (kw == "v") {
            std::string kind, lb, ub, name;
            is >> kind >> lb >> ub;
            std::getline(is, name);
            if (!name.empty() && name[0] == ' ') name.erase(0, 1);
            Index v = m.add_var(name, parse_num(lb), parse_num(ub));
            if (kind == "b") m.mark_binary(v);
        } else if (kw == "obj") {
            m.set_objective(parse_expr(is));
        } else if (kw == "eq" || kw == "le") {
            LinExpr e = parse_expr(is);
            std::string name;
            std::getline(is, name);
            if (!name.empty() && name[0] == ' ') name.erase(0, 1);
            if (kw == "eq")
                m.add_eq(std::move(e), name);
            else
                m.add_le(std::move(e), name);
        } else if (kw == "soc") {
            int n;
            is >> n;
            std::string sep;
            is >> sep;  // first ";"
            SocRow row;
            for (int k = 0; k < n; ++k) row.args.push_back(parse_expr(is));
            std::string name;
            std::getline(is, name);
            if (!name.empty() && name[0] == ' ') name.erase(0, 1);
            row.name = name;
            m.add_soc(std::move(row));
        }
    }
    return m;
}

}  // namespace wrp
