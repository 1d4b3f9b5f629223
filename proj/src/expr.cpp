#include "wdvv/expr.hpp"

#include <algorithm>
#include <cctype>

namespace wdvv {

// ---------------------------------------------------------------- construction

namespace {

std::shared_ptr<ExprNode> make_node(ExprKind k) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    return n;
}

}  // namespace

Expr Expr::constant(Coefficient c) {
    auto n = make_node(ExprKind::Const);
    n->value = std::move(c);
    return Expr(std::move(n));
}

Expr Expr::var(std::string name) {
    auto n = make_node(ExprKind::Var);
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::jet(std::string func, std::vector<std::string> index) {
    std::sort(index.begin(), index.end());
    auto n = make_node(ExprKind::Jet);
    n->name = std::move(func);
    n->index = std::move(index);
    return Expr(std::move(n));
}

Expr Expr::root(std::string name, Expr radicand) {
    auto n = make_node(ExprKind::Root);
    n->name = std::move(name);
    n->args.push_back(std::move(radicand));
    return Expr(std::move(n));
}

Expr Expr::log(Expr arg) {
    auto n = make_node(ExprKind::Log);
    n->args.push_back(std::move(arg));
    return Expr(std::move(n));
}

Expr Expr::exp(Expr arg) {
    auto n = make_node(ExprKind::Exp);
    n->args.push_back(std::move(arg));
    return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    Coefficient c(0);
    for (Expr& t : terms) {
        if (t.kind() == ExprKind::Sum) {
            for (const Expr& s : t.args()) {
                if (s.is_const())
                    c += s.node().value;
                else
                    flat.push_back(s);
            }
        } else if (t.is_const()) {
            c += t.node().value;
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (!c.is_zero()) flat.push_back(constant(c));
    if (flat.empty()) return Expr(0);
    if (flat.size() == 1) return flat[0];
    auto n = make_node(ExprKind::Sum);
    n->args = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    Coefficient c(1);
    for (Expr& f : factors) {
        if (f.kind() == ExprKind::Product) {
            for (const Expr& s : f.args()) {
                if (s.is_const())
                    c *= s.node().value;
                else
                    flat.push_back(s);
            }
        } else if (f.is_const()) {
            c *= f.node().value;
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (c.is_zero()) return Expr(0);
    if (!c.is_one()) flat.insert(flat.begin(), constant(c));
    if (flat.empty()) return Expr(1);
    if (flat.size() == 1) return flat[0];
    auto n = make_node(ExprKind::Product);
    n->args = std::move(flat);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, Exponent q) {
    if (q.is_zero()) return Expr(1);
    if (q == Exponent(1)) return base;
    if (base.is_const() && q.is_integer()) {
        const Coefficient& v = base.node().value;
        if (!v.is_zero() || q > Exponent(0)) {
            auto c = coefficient_power(v, q).constant();
            if (c) return constant(*c);
        }
    }
    if (base.kind() == ExprKind::Power && q.is_integer())
        return power(base.args()[0], base.node().exp * q);
    auto n = make_node(ExprKind::Power);
    n->args.push_back(std::move(base));
    n->exp = q;
    return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.n_ == b.n_) return true;
    const ExprNode& x = *a.n_;
    const ExprNode& y = *b.n_;
    if (x.kind != y.kind || x.name != y.name || x.index != y.index || x.exp != y.exp || x.value != y.value)
        return false;
    if (x.args.size() != y.args.size()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
        if (x.args[i] != y.args[i]) return false;
    return true;
}

DiffRules Context::diff_rules() const {
    DiffRules r;
    r.functions = functions;
    return r;
}

// ---------------------------------------------------------------- parser

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

namespace {

class Parser {
public:
    Parser(const std::string& text, const Context& ctx) : s_(text), ctx_(ctx) {}

    Expr run() {
        Expr e = expr();
        skip();
        if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, p_); }

    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }

    bool accept(char c) {
        skip();
        if (p_ < s_.size() && s_[p_] == c) {
            ++p_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+'))
                terms.push_back(term());
            else if (accept('-'))
                terms.push_back(-term());
            else
                break;
        }
        return Expr::sum(std::move(terms));
    }

    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                const std::size_t at = p_;
                Expr d = unary();
                if (d.is_zero()) throw ParseError("division by zero literal", at);
                acc = acc / d;
            } else {
                break;
            }
        }
        return acc;
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept('^')) return base;
        const std::size_t at = p_;
        Expr e = accept('-') ? -power() : power();
        if (!e.is_const() || !e.node().value.is_real()) throw ParseError("exponent must be a rational constant", at);
        const mpq_class& q = e.node().value.re();
        if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw ParseError("exponent too large", at);
        return Expr::power(base, Exponent(q.get_num().get_si(), q.get_den().get_si()));
    }

    std::string identifier() {
        skip();
        const std::size_t start = p_;
        if (p_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_'))
            fail("expected identifier");
        while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
        return s_.substr(start, p_ - start);
    }

    Expr primary() {
        skip();
        if (p_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[p_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = p_;
            while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
            return Expr::constant(Coefficient(mpq_class(mpz_class(s_.substr(start, p_ - start)))));
        }
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) fail("unexpected '" + std::string(1, c) + "'");
        const std::size_t start = p_;
        const std::string id = identifier();
        skip();
        if (p_ < s_.size() && s_[p_] == '(') {
            if (id == "D") return jet_call();
            ++p_;
            Expr arg = expr();
            expect(')');
            if (id == "log") return Expr::log(arg);
            if (id == "exp") return Expr::exp(arg);
            if (id == "sqrt") return Expr::sqrt(arg);
            throw ParseError("unknown function '" + id + "'", start);
        }
        return resolve(id, start);
    }

    Expr jet_call() {
        expect('(');
        const std::string f = identifier();
        expect(';');
        std::vector<std::string> idx;
        skip();
        if (!accept(')')) {
            do idx.push_back(identifier());
            while (accept(','));
            expect(')');
        }
        return Expr::jet(f, std::move(idx));
    }

    // Splits a shorthand suffix like "xxy" into argument names of f.
    static bool split_suffix(const std::string& suffix, const std::vector<std::string>& args,
                             std::vector<std::string>& out) {
        if (suffix.empty()) return true;
        std::vector<std::string> sorted = args;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
        for (const std::string& a : sorted) {
            if (suffix.compare(0, a.size(), a) == 0) {
                out.push_back(a);
                if (split_suffix(suffix.substr(a.size()), args, out)) return true;
                out.pop_back();
            }
        }
        return false;
    }

    Expr resolve(const std::string& id, std::size_t at) {
        if (id == "I") return Expr::constant(Coefficient::imaginary_unit());
        if (auto r = ctx_.roots.find(id); r != ctx_.roots.end()) return Expr::root(id, r->second);
        if (ctx_.functions.count(id)) return Expr::jet(id, {});
        const auto us = id.find('_');
        if (us != std::string::npos && us > 0) {
            auto f = ctx_.functions.find(id.substr(0, us));
            std::vector<std::string> idx;
            if (f != ctx_.functions.end() && us + 1 < id.size() && split_suffix(id.substr(us + 1), f->second, idx))
                return Expr::jet(f->first, std::move(idx));
        }
        if (ctx_.symbols && !ctx_.symbols->count(id)) throw ParseError("unknown identifier '" + id + "'", at);
        return Expr::var(id);
    }

    const std::string& s_;
    const Context& ctx_;
    std::size_t p_ = 0;
};

}  // namespace

Expr parse(const std::string& text, const Context& ctx) { return Parser(text, ctx).run(); }

// ---------------------------------------------------------------- printer

namespace {

enum Prec { kSum = 1, kProduct = 2, kPower = 3, kAtom = 4 };

std::string render_at(const Expr& e, int parent);

std::string jet_text(const ExprNode& n) {
    if (n.index.empty()) return n.name;
    bool short_ok = true;
    for (const auto& i : n.index) short_ok = short_ok && i.size() == 1;
    std::string s;
    if (short_ok) {
        s = n.name + "_";
        for (const auto& i : n.index) s += i;
        return s;
    }
    s = "D(" + n.name + ";";
    for (std::size_t i = 0; i < n.index.size(); ++i) s += (i ? ", " : " ") + n.index[i];
    return s + ")";
}

std::string render_product(const Expr& e) {
    std::vector<std::string> num, den;
    std::string sign;
    const auto& fs = e.args();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const Expr& f = fs[i];
        if (i == 0 && f.is_const()) {
            const Coefficient& v = f.node().value;
            if (v == Coefficient(-1)) {
                sign = "-";
                continue;
            }
            if (v.is_real() && v.re() < 0) {
                sign = "-";
                const mpq_class a = -v.re();
                if (a.get_num() != 1) num.push_back(mpz_class(a.get_num()).get_str());
                if (a.get_den() != 1) den.push_back(mpz_class(a.get_den()).get_str());
                continue;
            }
            if (v.is_real() && v.re().get_den() != 1) {
                if (v.re().get_num() != 1) num.push_back(mpz_class(v.re().get_num()).get_str());
                den.push_back(mpz_class(v.re().get_den()).get_str());
                continue;
            }
            num.push_back(v.is_atomic_str() || v.str()[0] == '(' ? v.str() : "(" + v.str() + ")");
            continue;
        }
        if (f.kind() == ExprKind::Power && f.node().exp < Exponent(0)) {
            den.push_back(render_at(Expr::power(f.args()[0], -f.node().exp), kPower));
            continue;
        }
        num.push_back(render_at(f, kProduct));
    }
    std::string s = sign;
    if (num.empty()) s += "1";
    for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
    for (const auto& d : den) s += "/" + d;
    return s;
}

std::string render_at(const Expr& e, int parent) {
    const ExprNode& n = e.node();
    std::string s;
    int own = kAtom;
    switch (n.kind) {
        case ExprKind::Const:
            s = n.value.str();
            if (s[0] == '(' || s == "I" || (n.value.is_real() && n.value.is_atomic_str())) return s;
            own = s[0] == '-' ? kSum : kProduct;
            break;
        case ExprKind::Var:
        case ExprKind::Root:
            return n.name;
        case ExprKind::Jet:
            return jet_text(n);
        case ExprKind::Log:
            return "log(" + render_at(n.args[0], 0) + ")";
        case ExprKind::Exp:
            return "exp(" + render_at(n.args[0], 0) + ")";
        case ExprKind::Sum: {
            own = kSum;
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                std::string t = render_at(n.args[i], kSum);
                if (i == 0)
                    s = t;
                else if (t[0] == '-')
                    s += " - " + t.substr(1);
                else
                    s += " + " + t;
            }
            break;
        }
        case ExprKind::Product:
            s = render_product(e);
            own = s[0] == '-' ? kSum : kProduct;
            break;
        case ExprKind::Power: {
            if (n.exp == Exponent(1, 2)) return "sqrt(" + render_at(n.args[0], 0) + ")";
            if (n.exp < Exponent(0)) {
                s = "1/" + render_at(Expr::power(n.args[0], -n.exp), kPower);
                own = kProduct;
                break;
            }
            s = render_at(n.args[0], kAtom) + "^";
            s += n.exp.is_integer() ? n.exp.str() : "(" + n.exp.str() + ")";
            own = kPower;
            break;
        }
    }
    if (own < parent || (own == parent && parent == kPower)) return "(" + s + ")";
    return s;
}

}  // namespace

std::string render(const Expr& e) { return render_at(e, 0); }

// ---------------------------------------------------------------- calculus

Expr differentiate(const Expr& e, const std::string& v, const Context& ctx) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Const:
            return Expr(0);
        case ExprKind::Var:
            return Expr(n.name == v ? 1 : 0);
        case ExprKind::Jet: {
            auto f = ctx.functions.find(n.name);
            if (f != ctx.functions.end() && std::find(f->second.begin(), f->second.end(), v) == f->second.end())
                return Expr(0);
            std::vector<std::string> idx = n.index;
            idx.push_back(v);
            return Expr::jet(n.name, std::move(idx));
        }
        case ExprKind::Root: {
            const Expr& R = n.args[0];
            Expr dR = differentiate(R, v, ctx);
            if (dR.is_zero()) return Expr(0);
            return Expr::product({dR, e, Expr::power(Expr::product({Expr(2), R}), Exponent(-1))});
        }
        case ExprKind::Log:
            return differentiate(n.args[0], v, ctx) / n.args[0];
        case ExprKind::Exp:
            return e * differentiate(n.args[0], v, ctx);
        case ExprKind::Sum: {
            std::vector<Expr> t;
            for (const Expr& a : n.args) t.push_back(differentiate(a, v, ctx));
            return Expr::sum(std::move(t));
        }
        case ExprKind::Product: {
            std::vector<Expr> t;
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                Expr d = differentiate(n.args[i], v, ctx);
                if (d.is_zero()) continue;
                std::vector<Expr> f;
                for (std::size_t j = 0; j < n.args.size(); ++j) f.push_back(i == j ? d : n.args[j]);
                t.push_back(Expr::product(std::move(f)));
            }
            return Expr::sum(std::move(t));
        }
        case ExprKind::Power: {
            Expr d = differentiate(n.args[0], v, ctx);
            if (d.is_zero()) return Expr(0);
            const Exponent q = n.exp;
            return Expr::product({Expr::constant(Coefficient(mpq_class(q.num(), q.den()))),
                                  Expr::power(n.args[0], q - Exponent(1)), d});
        }
    }
    return Expr(0);
}

Expr substitute(const Expr& e, const ExprBindings& bindings, bool strict_jets) {
    for (const auto& [k, v] : bindings)
        if (k == e) return v;
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Const:
        case ExprKind::Var:
            return e;
        case ExprKind::Jet:
            if (strict_jets) throw AlgebraError("unbound jet variable " + jet_text(n));
            return e;
        case ExprKind::Root:
            return Expr::root(n.name, substitute(n.args[0], bindings, strict_jets));
        case ExprKind::Log:
            return Expr::log(substitute(n.args[0], bindings, strict_jets));
        case ExprKind::Exp:
            return Expr::exp(substitute(n.args[0], bindings, strict_jets));
        case ExprKind::Sum:
        case ExprKind::Product: {
            std::vector<Expr> a;
            for (const Expr& x : n.args) a.push_back(substitute(x, bindings, strict_jets));
            return n.kind == ExprKind::Sum ? Expr::sum(std::move(a)) : Expr::product(std::move(a));
        }
        case ExprKind::Power:
            return Expr::power(substitute(n.args[0], bindings, strict_jets), n.exp);
    }
    return e;
}

// ---------------------------------------------------------------- normal forms

NormalForm normalize(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Const:
            return NormalForm(n.value);
        case ExprKind::Var:
            return NormalForm::from_base(variable_base(n.name));
        case ExprKind::Jet:
            return NormalForm::from_base(jet_base(n.name, n.index));
        case ExprKind::Root: {
            NormalForm R = normalize(n.args[0]);
            if (R.is_zero()) throw AlgebraError("algebraic root with zero defining value");
            return make_sqrt(R);
        }
        case ExprKind::Log:
            return make_log(normalize(n.args[0]));
        case ExprKind::Exp:
            return make_exp(normalize(n.args[0]));
        case ExprKind::Sum: {
            NormalForm acc;
            for (const Expr& a : n.args) acc += normalize(a);
            return acc;
        }
        case ExprKind::Product: {
            NormalForm acc(Coefficient(1));
            for (const Expr& a : n.args) acc *= normalize(a);
            return acc;
        }
        case ExprKind::Power:
            return pow(normalize(n.args[0]), n.exp);
    }
    return NormalForm();
}

bool is_identically_zero(const Expr& e) { return normalize(e).is_zero(); }

namespace {

Expr base_expr(Base b) {
    switch (b->kind) {
        case BaseKind::Variable:
            return Expr::var(b->name);
        case BaseKind::Jet:
            return Expr::jet(b->name, b->index);
        case BaseKind::Log:
            return Expr::log(to_expr(*b->arg));
        case BaseKind::Exp:
            return Expr::exp(to_expr(*b->arg));
        case BaseKind::Root:
            return Expr::sqrt(to_expr(*b->arg));
        case BaseKind::Prime:
            return Expr::constant(Coefficient(mpq_class(b->prime)));
    }
    return Expr(0);
}

Expr poly_expr(const Poly& p) {
    std::vector<Expr> terms;
    for (const Term& t : p.terms()) {
        std::vector<Expr> f{Expr::constant(t.coeff)};
        for (const Power& pw : t.mono.factors()) f.push_back(Expr::power(base_expr(pw.base), pw.exp));
        terms.push_back(Expr::product(std::move(f)));
    }
    return Expr::sum(std::move(terms));
}

}  // namespace

Expr to_expr(const NormalForm& a) {
    Expr num = poly_expr(a.num());
    if (a.den().empty()) return num;
    std::vector<Expr> f{num};
    for (const DenFactor& d : a.den()) f.push_back(Expr::power(poly_expr(d.poly), Exponent(-d.mult)));
    return Expr::product(std::move(f));
}

std::set<std::string> free_variables(const Expr& e) {
    std::set<std::string> out;
    std::vector<const Expr*> stack{&e};
    while (!stack.empty()) {
        const Expr* x = stack.back();
        stack.pop_back();
        if (x->kind() == ExprKind::Var) out.insert(x->node().name);
        for (const Expr& a : x->args()) stack.push_back(&a);
    }
    return out;
}

}  // namespace wdvv
