#include "grr/scenario.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace grr {

namespace {

// --- lexing ------------------------------------------------------------------

struct Token {
    enum Kind { Ident, Integer, Sym, End } kind = End;
    std::string text;
    long long value = 0;
    int line = 0, col = 0;
};

[[noreturn]] void parse_fail(int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ":" << col << ": " << msg;
    fail(Errc::ParseError, os.str());
}

std::vector<Token> lex_line(const std::string& s, int line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        int col = int(i) + 1;
        if (std::isalpha(c) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(s[j]) || s[j] == '_')) ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), 0, line, col});
            i = j;
        } else if (std::isdigit(c)) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(s[j])) ++j;
            Token t{Token::Integer, s.substr(i, j - i), 0, line, col};
            try {
                t.value = std::stoll(t.text);
            } catch (...) {
                parse_fail(line, col, "integer literal out of range");
            }
            out.push_back(t);
            i = j;
        } else if (c == '=' && i + 1 < s.size() && s[i + 1] == '=') {
            out.push_back({Token::Sym, "==", 0, line, col});
            i += 2;
        } else if (std::string("=()[],+-*^:/").find(c) != std::string::npos) {
            out.push_back({Token::Sym, std::string(1, c), 0, line, col});
            ++i;
        } else {
            parse_fail(line, col, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::End, "", 0, line, int(s.size()) + 1});
    return out;
}

// --- expression parsing --------------------------------------------------------

struct Cursor {
    const std::vector<Token>* toks;
    std::size_t pos = 0;

    const Token& peek() const { return (*toks)[pos]; }
    Token take() { return (*toks)[pos++]; }
    bool at_sym(const std::string& s) const {
        return peek().kind == Token::Sym && peek().text == s;
    }
    void expect_sym(const std::string& s) {
        if (!at_sym(s)) parse_fail(peek().line, peek().col, "expected '" + s + "'");
        ++pos;
    }
    Token expect_ident(const std::string& what) {
        if (peek().kind != Token::Ident) parse_fail(peek().line, peek().col, "expected " + what);
        return take();
    }
    long long expect_int(const std::string& what) {
        bool neg = false;
        if (at_sym("-")) {
            neg = true;
            ++pos;
        }
        if (peek().kind != Token::Integer) {
            parse_fail(peek().line, peek().col, "expected " + what);
        }
        long long v = take().value;
        return neg ? -v : v;
    }
    void expect_end() {
        if (peek().kind != Token::End) {
            parse_fail(peek().line, peek().col, "unexpected trailing input");
        }
    }
};

Expr parse_expr(Cursor& c);

Expr parse_atom(Cursor& c) {
    const Token& t = c.peek();
    Expr e;
    e.line = t.line;
    e.col = t.col;
    if (t.kind == Token::Integer) {
        Token num = c.take();
        Rational q(num.value);
        if (c.at_sym("/")) {
            c.take();
            if (c.peek().kind != Token::Integer) {
                parse_fail(c.peek().line, c.peek().col, "expected denominator");
            }
            Token den = c.take();
            if (den.value == 0) parse_fail(den.line, den.col, "zero denominator");
            q = Rational(num.value, den.value);
        }
        e.kind = Expr::Rat;
        e.rat = q;
        return e;
    }
    if (t.kind == Token::Ident) {
        Token id = c.take();
        if (c.at_sym("(")) {
            c.take();
            e.kind = Expr::Call;
            e.name = id.text;
            if (!c.at_sym(")")) {
                e.args.push_back(parse_expr(c));
                while (c.at_sym(",")) {
                    c.take();
                    e.args.push_back(parse_expr(c));
                }
            }
            c.expect_sym(")");
            return e;
        }
        e.kind = Expr::Name;
        e.name = id.text;
        return e;
    }
    if (c.at_sym("(")) {
        c.take();
        e = parse_expr(c);
        c.expect_sym(")");
        return e;
    }
    parse_fail(t.line, t.col, "expected an expression");
}

Expr parse_power(Cursor& c) {
    Expr base = parse_atom(c);
    if (c.at_sym("^")) {
        Token caret = c.take();
        if (c.peek().kind != Token::Integer) {
            parse_fail(c.peek().line, c.peek().col, "expected integer exponent");
        }
        long long v = c.take().value;
        if (v < 0) parse_fail(caret.line, caret.col, "negative exponent");
        Expr e;
        e.kind = Expr::Pow;
        e.exponent = unsigned(v);
        e.line = base.line;
        e.col = base.col;
        e.args.push_back(std::move(base));
        return e;
    }
    return base;
}

Expr parse_factor(Cursor& c) {
    if (c.at_sym("-")) {
        Token m = c.take();
        Expr e;
        e.kind = Expr::Neg;
        e.line = m.line;
        e.col = m.col;
        e.args.push_back(parse_factor(c));
        return e;
    }
    return parse_power(c);
}

Expr parse_term(Cursor& c) {
    Expr e = parse_factor(c);
    while (c.at_sym("*")) {
        Token op = c.take();
        Expr b;
        b.kind = Expr::Bin;
        b.op = '*';
        b.line = op.line;
        b.col = op.col;
        b.args.push_back(std::move(e));
        b.args.push_back(parse_factor(c));
        e = std::move(b);
    }
    return e;
}

Expr parse_expr(Cursor& c) {
    Expr e = parse_term(c);
    while (c.at_sym("+") || c.at_sym("-")) {
        Token op = c.take();
        Expr b;
        b.kind = Expr::Bin;
        b.op = op.text[0];
        b.line = op.line;
        b.col = op.col;
        b.args.push_back(std::move(e));
        b.args.push_back(parse_term(c));
        e = std::move(b);
    }
    return e;
}

}  // namespace

// --- statement parsing -----------------------------------------------------------

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = lex_line(line, lineno);
        Cursor c{&toks, 0};
        if (c.peek().kind == Token::End) continue;
        Token head = c.expect_ident("a statement");
        Statement st;
        st.line = lineno;
        if (head.text == "space") {
            st.kind = Statement::SpaceDecl;
            st.name = c.expect_ident("a space name").text;
            c.expect_sym("=");
            st.ctor = c.expect_ident("a constructor").text;
            if (st.ctor == "point") {
            } else if (st.ctor == "proj") {
                st.ints.push_back(int(c.expect_int("a dimension")));
            } else if (st.ctor == "projbundle") {
                st.words.push_back(c.expect_ident("a base space").text);
                st.words.push_back(c.expect_ident("a bundle").text);
            } else if (st.ctor == "product_p1") {
                st.words.push_back(c.expect_ident("a base space").text);
            } else if (st.ctor == "blowup") {
                st.words.push_back(c.expect_ident("a base space").text);
                st.words.push_back(c.expect_ident("a center immersion").text);
            } else {
                parse_fail(head.line, head.col, "unknown space constructor " + st.ctor);
            }
        } else if (head.text == "immersion") {
            st.kind = Statement::ImmersionDecl;
            st.name = c.expect_ident("an immersion name").text;
            c.expect_sym("=");
            st.ctor = c.expect_ident("a constructor").text;
            if (st.ctor != "sub_linear") {
                parse_fail(head.line, head.col, "unknown immersion constructor " + st.ctor);
            }
            st.words.push_back(c.expect_ident("an ambient space").text);
            st.ints.push_back(int(c.expect_int("a dimension")));
        } else if (head.text == "bundle") {
            st.kind = Statement::BundleDecl;
            st.name = c.expect_ident("a bundle name").text;
            if (c.expect_ident("'on'").text != "on") {
                parse_fail(lineno, c.peek().col, "expected 'on'");
            }
            st.on = c.expect_ident("a space name").text;
            c.expect_sym("=");
            if (c.expect_ident("'rank'").text != "rank") {
                parse_fail(lineno, c.peek().col, "expected 'rank'");
            }
            st.ints.push_back(int(c.expect_int("a rank")));
            if (c.expect_ident("'chern'").text != "chern") {
                parse_fail(lineno, c.peek().col, "expected 'chern'");
            }
            c.expect_sym("[");
            if (!c.at_sym("]")) {
                st.exprs.push_back(parse_expr(c));
                while (c.at_sym(",")) {
                    c.take();
                    st.exprs.push_back(parse_expr(c));
                }
            }
            c.expect_sym("]");
        } else if (head.text == "class") {
            st.kind = Statement::ClassDecl;
            st.name = c.expect_ident("a class name").text;
            if (c.expect_ident("'on'").text != "on") {
                parse_fail(lineno, c.peek().col, "expected 'on'");
            }
            st.on = c.expect_ident("a space name").text;
            c.expect_sym("=");
            st.exprs.push_back(parse_expr(c));
        } else if (head.text == "eval") {
            st.kind = Statement::Eval;
            st.on = c.expect_ident("a space name").text;
            c.expect_sym(":");
            st.exprs.push_back(parse_expr(c));
        } else if (head.text == "expect") {
            st.kind = Statement::Expect;
            st.on = c.expect_ident("a space name").text;
            c.expect_sym(":");
            st.exprs.push_back(parse_expr(c));
            c.expect_sym("==");
            st.exprs.push_back(parse_expr(c));
        } else if (head.text == "check") {
            st.kind = Statement::Check;
            st.ctor = c.expect_ident("a check name").text;
            if (st.ctor == "self_intersection") {
                st.words.push_back(c.expect_ident("an immersion").text);
                st.exprs.push_back(parse_expr(c));
            } else if (st.ctor == "whitney" || st.ctor == "lambda") {
                st.words.push_back(c.expect_ident("a bundle").text);
                if (st.ctor == "whitney") st.words.push_back(c.expect_ident("a bundle").text);
            } else if (st.ctor == "hrr") {
                st.ints.push_back(int(c.expect_int("n")));
                st.ints.push_back(int(c.expect_int("d")));
            } else if (st.ctor == "grr" || st.ctor == "k_theory") {
                st.words.push_back(c.expect_ident("an immersion").text);
                if (c.peek().kind != Token::End) st.ints.push_back(int(c.expect_int("a twist")));
            } else if (st.ctor == "excess") {
                st.words.push_back(c.expect_ident("an immersion").text);
                if (c.peek().kind != Token::End) st.exprs.push_back(parse_expr(c));
            } else if (st.ctor == "deformation") {
                st.words.push_back(c.expect_ident("an immersion").text);
                st.ints.push_back(int(c.expect_int("twist of F")));
                st.ints.push_back(int(c.expect_int("twist of E")));
            } else if (st.ctor == "divisor_pullback") {
                for (int i = 0; i < 2; ++i) {
                    Expr e = parse_expr(c);
                    if (e.kind == Expr::Rat) {
                        st.rats.push_back(e.rat);
                    } else if (e.kind == Expr::Neg && e.args[0].kind == Expr::Rat) {
                        st.rats.push_back(-e.args[0].rat);
                    } else {
                        parse_fail(e.line, e.col, "expected a rational coefficient");
                    }
                }
            } else if (st.ctor == "snc") {
                st.words.push_back(c.expect_ident("a configuration").text);
                while (c.peek().kind != Token::End) {
                    st.ints.push_back(int(c.expect_int("a multiplicity")));
                }
            } else if (st.ctor == "blowup_sanity") {
                st.words.push_back(c.expect_ident("an immersion").text);
            } else {
                parse_fail(head.line, head.col, "unknown check " + st.ctor);
            }
        } else {
            parse_fail(head.line, head.col, "unknown statement " + head.text);
        }
        c.expect_end();
        sc.statements.push_back(std::move(st));
    }
    return sc;
}

// --- evaluation --------------------------------------------------------------------

namespace {

struct Env {
    std::map<std::string, Space> spaces;
    std::map<std::string, Immersion> imms;
    std::map<std::string, Morphism> morphs;
    std::map<std::string, BundleClass> bundles;
    std::map<std::string, Cls> classes;

    bool taken(const std::string& n) const {
        return spaces.count(n) || imms.count(n) || morphs.count(n) || bundles.count(n) ||
               classes.count(n);
    }
    void claim(const std::string& n, int line) {
        if (taken(n)) {
            fail(Errc::NameError, "line " + std::to_string(line) + ": name " + n +
                                      " is already defined");
        }
    }
    // a "space position" name can be a space or an immersion's subvariety
    Space resolve_space(const std::string& n, int line) const {
        auto it = spaces.find(n);
        if (it != spaces.end()) return it->second;
        auto ii = imms.find(n);
        if (ii != imms.end()) return ii->second.sub;
        fail(Errc::NameError, "line " + std::to_string(line) + ": unknown space " + n);
    }
    const Immersion& resolve_imm(const std::string& n, int line) const {
        auto it = imms.find(n);
        if (it == imms.end()) {
            fail(Errc::NameError, "line " + std::to_string(line) + ": unknown immersion " + n);
        }
        return it->second;
    }
    const BundleClass& resolve_bundle(const std::string& n, int line) const {
        auto it = bundles.find(n);
        if (it == bundles.end()) {
            fail(Errc::NameError, "line " + std::to_string(line) + ": unknown bundle " + n);
        }
        return it->second;
    }
};

struct Value {
    bool is_bundle = false;
    Cls cls;
    BundleClass bun;
};

[[noreturn]] void type_fail(const Expr& e, const std::string& msg) {
    std::ostringstream os;
    os << "line " << e.line << ":" << e.col << ": " << msg;
    fail(Errc::TypeError, os.str());
}

Value eval_expr(const Expr& e, const Space& ctx, const Env& env);

Cls eval_class(const Expr& e, const Space& ctx, const Env& env) {
    Value v = eval_expr(e, ctx, env);
    if (v.is_bundle) type_fail(e, "expected a class, got a bundle");
    return v.cls;
}

BundleClass eval_bundle(const Expr& e, const Space& ctx, const Env& env) {
    Value v = eval_expr(e, ctx, env);
    if (!v.is_bundle) type_fail(e, "expected a bundle");
    return v.bun;
}

Value eval_expr(const Expr& e, const Space& ctx, const Env& env) {
    switch (e.kind) {
        case Expr::Rat:
            return {false, Cls::constant(ctx, e.rat), {}};
        case Expr::Name: {
            if (!ctx->is_blowup()) {
                int gi = space_ring(ctx)->find_gen(e.name);
                if (gi >= 0) {
                    return {false,
                            Cls::of(ctx, GradedElement::generator(space_ring(ctx),
                                                                  std::size_t(gi))),
                            {}};
                }
            }
            auto ci = env.classes.find(e.name);
            if (ci != env.classes.end()) {
                if (ci->second.space() != ctx) type_fail(e, e.name + " lives on another space");
                return {false, ci->second, {}};
            }
            auto bi = env.bundles.find(e.name);
            if (bi != env.bundles.end()) {
                if (bi->second.space != ctx) type_fail(e, e.name + " lives on another space");
                return {true, {}, bi->second};
            }
            fail(Errc::NameError,
                 "line " + std::to_string(e.line) + ":" + std::to_string(e.col) +
                     ": unknown name " + e.name);
        }
        case Expr::Neg: {
            Value v = eval_expr(e.args[0], ctx, env);
            if (v.is_bundle) type_fail(e, "cannot negate a bundle");
            return {false, -v.cls, {}};
        }
        case Expr::Pow: {
            Cls b = eval_class(e.args[0], ctx, env);
            Cls r = Cls::constant(ctx, 1);
            for (unsigned i = 0; i < e.exponent; ++i) r = r * b;
            return {false, r, {}};
        }
        case Expr::Bin: {
            Cls a = eval_class(e.args[0], ctx, env);
            Cls b = eval_class(e.args[1], ctx, env);
            Cls r = e.op == '+' ? a + b : (e.op == '-' ? a - b : a * b);
            return {false, r, {}};
        }
        case Expr::Call: {
            const std::string& f = e.name;
            auto need_args = [&](std::size_t n) {
                if (e.args.size() != n) {
                    type_fail(e, f + " takes " + std::to_string(n) + " argument(s)");
                }
            };
            if (f == "chern") {
                need_args(2);
                BundleClass E = eval_bundle(e.args[0], ctx, env);
                if (e.args[1].kind != Expr::Rat || denominator(e.args[1].rat) != 1) {
                    type_fail(e, "chern index must be an integer");
                }
                long long i = numerator(e.args[1].rat).convert_to<long long>();
                if (i < 0) type_fail(e, "chern index must be nonnegative");
                return {false, Cls::of(ctx, E.c(std::size_t(i))), {}};
            }
            if (f == "ch" || f == "td" || f == "segre") {
                need_args(1);
                BundleClass E = eval_bundle(e.args[0], ctx, env);
                GradedElement g = f == "ch" ? chern_to_ch(E).ch
                                            : (f == "td" ? todd(E) : segre(E));
                return {false, Cls::of(ctx, g), {}};
            }
            if (f == "dual") {
                need_args(1);
                return {true, {}, dual(eval_bundle(e.args[0], ctx, env))};
            }
            if (f == "integral") {
                need_args(1);
                Cls v = eval_class(e.args[0], ctx, env);
                return {false, Cls::constant(ctx, ctx->integral(v)), {}};
            }
            if (f == "cyc") {
                need_args(1);
                if (e.args[0].kind != Expr::Name) type_fail(e, "cyc needs an immersion name");
                const Immersion& imm = env.resolve_imm(e.args[0].name, e.line);
                if (imm.ambient != ctx) type_fail(e, "cycle class lives on another space");
                return {false, imm.cycle_class, {}};
            }
            if (f == "push" || f == "pull") {
                need_args(2);
                if (e.args[0].kind != Expr::Name) type_fail(e, f + " needs a map name");
                const std::string& mn = e.args[0].name;
                auto mi = env.morphs.find(mn);
                if (mi != env.morphs.end()) {
                    const Morphism& m = mi->second;
                    if (f == "push") {
                        if (!m.pushforward) type_fail(e, mn + " has no pushforward");
                        if (m.target != ctx) type_fail(e, "pushforward lands on another space");
                        return {false, m.pushforward(eval_class(e.args[1], m.source, env)), {}};
                    }
                    if (m.source != ctx) type_fail(e, "pullback lands on another space");
                    return {false, m.pullback(eval_class(e.args[1], m.target, env)), {}};
                }
                auto ii = env.imms.find(mn);
                if (ii != env.imms.end()) {
                    const Immersion& imm = ii->second;
                    if (f == "push") {
                        if (imm.ambient != ctx) type_fail(e, "pushforward lands on another space");
                        return {false, imm.pushforward(eval_class(e.args[1], imm.sub, env)), {}};
                    }
                    if (imm.sub != ctx) type_fail(e, "restriction lands on another space");
                    return {false, imm.restrict_map(eval_class(e.args[1], imm.ambient, env)), {}};
                }
                fail(Errc::NameError, "line " + std::to_string(e.line) + ": unknown map " + mn);
            }
            fail(Errc::NameError,
                 "line " + std::to_string(e.line) + ": unknown function " + f);
        }
    }
    type_fail(e, "malformed expression");
}

std::string render_cls(const Cls& c, bool latex) { return latex ? c.latex() : c.str(); }

}  // namespace

RunResult run(const Scenario& sc, const RunOptions& opt) {
    Env env;
    std::ostringstream out;
    int exit_code = 0;
    try {
        for (const auto& st : sc.statements) {
            switch (st.kind) {
                case Statement::SpaceDecl: {
                    env.claim(st.name, st.line);
                    if (st.ctor == "point") {
                        env.spaces[st.name] = point();
                    } else if (st.ctor == "proj") {
                        env.spaces[st.name] = projective_space(st.ints[0]);
                    } else if (st.ctor == "projbundle") {
                        Space base = env.resolve_space(st.words[0], st.line);
                        auto pb = projective_bundle(base, env.resolve_bundle(st.words[1], st.line));
                        env.claim(st.name + "_pi", st.line);
                        env.spaces[st.name] = pb.total;
                        env.morphs[st.name + "_pi"] = pb.pi;
                    } else if (st.ctor == "product_p1") {
                        Space base = env.resolve_space(st.words[0], st.line);
                        auto pr = product_p1(base);
                        for (const char* suffix : {"_pr1", "_f0", "_fpt"}) {
                            env.claim(st.name + suffix, st.line);
                        }
                        env.spaces[st.name] = pr.total;
                        env.morphs[st.name + "_pr1"] = pr.pr1;
                        env.imms[st.name + "_f0"] = pr.fiber0;
                        env.imms[st.name + "_fpt"] = pr.fiber_pt;
                    } else {
                        Space base = env.resolve_space(st.words[0], st.line);
                        auto bl = blowup(base, env.resolve_imm(st.words[1], st.line));
                        for (const char* suffix : {"_p", "_E", "_q"}) {
                            env.claim(st.name + suffix, st.line);
                        }
                        env.spaces[st.name] = bl.total;
                        env.morphs[st.name + "_p"] = bl.p;
                        env.imms[st.name + "_E"] = bl.exceptional;
                        env.morphs[st.name + "_q"] = bl.q;
                    }
                    break;
                }
                case Statement::ImmersionDecl: {
                    env.claim(st.name, st.line);
                    Space amb = env.resolve_space(st.words[0], st.line);
                    env.imms[st.name] = sub_linear_space(amb, st.ints[0]);
                    break;
                }
                case Statement::BundleDecl: {
                    env.claim(st.name, st.line);
                    Space S = env.resolve_space(st.on, st.line);
                    std::vector<GradedElement> chern;
                    for (const auto& ex : st.exprs) chern.push_back(eval_class(ex, S, env).poly());
                    env.bundles[st.name] = make_bundle(S, st.ints[0], std::move(chern));
                    break;
                }
                case Statement::ClassDecl: {
                    env.claim(st.name, st.line);
                    Space S = env.resolve_space(st.on, st.line);
                    env.classes[st.name] = eval_class(st.exprs[0], S, env);
                    break;
                }
                case Statement::Eval: {
                    Space S = env.resolve_space(st.on, st.line);
                    Cls v = eval_class(st.exprs[0], S, env);
                    if (!opt.checks_only && !opt.quiet) {
                        out << st.on << " : " << render_cls(v, opt.latex) << "\n";
                    }
                    break;
                }
                case Statement::Expect: {
                    Space S = env.resolve_space(st.on, st.line);
                    Cls lhs = eval_class(st.exprs[0], S, env);
                    Cls rhs = eval_class(st.exprs[1], S, env);
                    Cls diff = lhs - rhs;
                    if (diff.is_zero()) {
                        if (!opt.quiet) out << "pass expect (" << st.on << ")\n";
                    } else {
                        exit_code = std::max(exit_code, 1);
                        if (!opt.quiet) {
                            out << "FAIL expect (" << st.on
                                << "): discrepancy = " << render_cls(diff, opt.latex) << "\n";
                        }
                    }
                    break;
                }
                case Statement::Check: {
                    CheckReport r;
                    if (st.ctor == "self_intersection") {
                        const Immersion& imm = env.resolve_imm(st.words[0], st.line);
                        r = check_self_intersection(imm, eval_class(st.exprs[0], imm.sub, env));
                    } else if (st.ctor == "whitney") {
                        const BundleClass& E = env.resolve_bundle(st.words[0], st.line);
                        const BundleClass& F = env.resolve_bundle(st.words[1], st.line);
                        r = check_whitney(E, F);
                    } else if (st.ctor == "lambda") {
                        r = check_lambda_identity(env.resolve_bundle(st.words[0], st.line));
                    } else if (st.ctor == "hrr") {
                        r = check_hrr_projective_space(st.ints[0], st.ints[1]);
                    } else if (st.ctor == "grr") {
                        const Immersion& imm = env.resolve_imm(st.words[0], st.line);
                        int tw = st.ints.empty() ? 0 : st.ints[0];
                        if (imm.prov.kind == ImmersionProvenance::Linear) {
                            r = check_grr_immersion(
                                linear_grr_scenario(imm.prov.n, imm.prov.k, tw));
                        } else {
                            GrrScenario s;
                            s.imm = imm;
                            s.payload = KClass{imm.sub, 1,
                                               GradedElement::constant(space_ring(imm.sub), 1)};
                            s.label = st.words[0];
                            r = check_grr_immersion(s);
                        }
                    } else if (st.ctor == "k_theory") {
                        const Immersion& imm = env.resolve_imm(st.words[0], st.line);
                        if (imm.prov.kind != ImmersionProvenance::Linear) {
                            fail(Errc::TypeError,
                                 "line " + std::to_string(st.line) +
                                     ": k_theory needs a linear immersion scenario");
                        }
                        r = check_k_theory_formulas(imm.prov.n, imm.prov.k,
                                                    st.ints.empty() ? 0 : st.ints[0]);
                    } else if (st.ctor == "excess") {
                        const Immersion& imm = env.resolve_imm(st.words[0], st.line);
                        auto B = blowup(imm.ambient, imm);
                        Cls a = st.exprs.empty() ? one(imm.sub)
                                                 : eval_class(st.exprs[0], imm.sub, env);
                        r = check_excess_deligne(B, imm, a);
                    } else if (st.ctor == "deformation") {
                        const Immersion& imm = env.resolve_imm(st.words[0], st.line);
                        Space X = imm.ambient;
                        const RingPtr& rx = space_ring(X);
                        GradedElement h = space_dim(X) > 0
                                              ? GradedElement::generator(rx, std::size_t(0))
                                              : GradedElement::zero(rx);
                        GradedElement hy =
                            space_dim(imm.sub) > 0
                                ? GradedElement::generator(space_ring(imm.sub), std::size_t(0))
                                : GradedElement::zero(space_ring(imm.sub));
                        r = check_deformation_lemma(X, imm,
                                                    line_bundle(X, Rational(st.ints[0]) * h),
                                                    line_bundle(imm.sub, Rational(st.ints[1]) * hy));
                    } else if (st.ctor == "divisor_pullback") {
                        r = check_divisor_pullback({}, st.rats[0], st.rats[1]);
                    } else if (st.ctor == "snc") {
                        std::vector<int> mults(st.ints.begin(), st.ints.end());
                        SNCDivisor D = st.words[0] == "planes_p3" ? coordinate_planes_p3(mults)
                                                                  : coordinate_lines_p2(mults);
                        r = check_snc_suite(D);
                    } else if (st.ctor == "blowup_sanity") {
                        const Immersion& imm = env.resolve_imm(st.words[0], st.line);
                        r = check_blowup_sanity(imm.ambient, imm);
                    }
                    if (r.status == CheckStatus::Fail) exit_code = std::max(exit_code, 1);
                    if (!opt.quiet) out << report_to_string(r, opt.latex, false) << "\n";
                    break;
                }
            }
        }
    } catch (const Error& e) {
        return RunResult{2, out.str() + "error: " + e.what() + "\n"};
    }
    return RunResult{exit_code, out.str()};
}

RunResult run_text(const std::string& text, const RunOptions& opt) {
    try {
        Scenario sc = parse_scenario(text);
        return run(sc, opt);
    } catch (const Error& e) {
        return RunResult{2, std::string("error: ") + e.what() + "\n"};
    }
}

// --- expand ------------------------------------------------------------------------

namespace {

BundleClass universal_bundle(int rank, int dim, Space* out_space) {
    std::vector<Generator> gens;
    for (int i = 1; i <= std::min(rank, dim); ++i) {
        gens.push_back({"c" + std::to_string(i), 2 * i});
    }
    Space U = formal_space(std::move(gens), dim, "universal");
    std::vector<GradedElement> cs;
    for (int i = 1; i <= std::min(rank, dim); ++i) {
        cs.push_back(GradedElement::generator(space_ring(U), std::size_t(i - 1)));
    }
    *out_space = U;
    return make_bundle(U, rank, std::move(cs));
}

}  // namespace

std::string expand_todd(int rank, int dim, bool latex) {
    if (rank < 1 || dim < 1) fail(Errc::TypeError, "expand needs rank >= 1 and dim >= 1");
    Space U;
    BundleClass E = universal_bundle(rank, dim, &U);
    GradedElement td = todd(E);
    std::ostringstream os;
    for (int k = 0; k <= dim; ++k) {
        GradedElement part = td.degree_part(2 * k);
        os << "td_" << k << " = " << (latex ? part.latex() : part.str()) << "\n";
    }
    return os.str();
}

std::string expand_newton(int rank, int dim, bool latex) {
    if (rank < 1 || dim < 1) fail(Errc::TypeError, "expand needs rank >= 1 and dim >= 1");
    Space U;
    BundleClass E = universal_bundle(rank, dim, &U);
    GradedElement ch = chern_to_ch(E).ch;
    std::ostringstream os;
    for (int k = 0; k <= dim; ++k) {
        GradedElement part = ch.degree_part(2 * k);
        os << "ch_" << k << " = " << (latex ? part.latex() : part.str()) << "\n";
    }
    return os.str();
}

// --- smith -------------------------------------------------------------------------

namespace {

LocalSeries eval_local(const Expr& e, const LocalVars& vars, int precision) {
    switch (e.kind) {
        case Expr::Rat:
            return LocalSeries::constant(vars, e.rat, precision);
        case Expr::Name: {
            for (std::size_t i = 0; i < vars->size(); ++i) {
                if ((*vars)[i] == e.name) {
                    LocalMono m(vars->size(), 0);
                    m[i] = 1;
                    return LocalSeries::monomial(vars, m, 1, precision);
                }
            }
            fail(Errc::NameError, "line " + std::to_string(e.line) + ": unknown variable " +
                                      e.name);
        }
        case Expr::Neg:
            return -eval_local(e.args[0], vars, precision);
        case Expr::Pow: {
            LocalSeries b = eval_local(e.args[0], vars, precision);
            LocalSeries r = LocalSeries::constant(vars, 1, precision);
            for (unsigned i = 0; i < e.exponent; ++i) r = r * b;
            return r.truncated(precision);
        }
        case Expr::Bin: {
            LocalSeries a = eval_local(e.args[0], vars, precision);
            LocalSeries b = eval_local(e.args[1], vars, precision);
            LocalSeries r = e.op == '+' ? a + b : (e.op == '-' ? a - b : a * b);
            return r.truncated(precision);
        }
        case Expr::Call:
            parse_fail(e.line, e.col, "calls are not allowed in matrix entries");
    }
    parse_fail(e.line, e.col, "malformed entry");
}

std::string mono_str(const LocalVars& vars, const LocalMono& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += (*vars)[i];
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

}  // namespace

LocalMatrix parse_matrix_file(const std::string& text, int precision_override) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    // header: r p vars...
    int r = 0, p = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = lex_line(line, lineno);
        Cursor c{&toks, 0};
        if (c.peek().kind == Token::End) continue;
        r = int(c.expect_int("the matrix size"));
        p = int(c.expect_int("the precision"));
        while (c.peek().kind == Token::Ident) names.push_back(c.take().text);
        c.expect_end();
        break;
    }
    if (r < 1) fail(Errc::ParseError, "matrix size must be >= 1");
    if (names.empty()) fail(Errc::ParseError, "header names no variables");
    if (precision_override > 0) p = precision_override;
    LocalVars vars = make_local_vars(names);
    LocalMatrix M;
    M.vars = vars;
    M.size = r;
    int need = r * r;
    while (int(M.entries.size()) < need && std::getline(in, line)) {
        ++lineno;
        auto toks = lex_line(line, lineno);
        Cursor c{&toks, 0};
        if (c.peek().kind == Token::End) continue;
        Expr e = parse_expr(c);
        c.expect_end();
        M.entries.push_back(eval_local(e, vars, p));
    }
    if (int(M.entries.size()) != need) {
        fail(Errc::ParseError, "expected " + std::to_string(need) + " matrix entries");
    }
    return M;
}

RunResult run_smith(const std::string& matrix_text, int precision_override, bool latex,
                    bool quiet) {
    std::ostringstream out;
    try {
        LocalMatrix M = parse_matrix_file(matrix_text, precision_override);
        SmithResult R;
        try {
            R = diagonalize(M);
        } catch (const Error& e) {
            if (e.code() == Errc::PrincipalityViolation || e.code() == Errc::PrecisionExhausted) {
                return RunResult{1, std::string(e.what()) + "\n"};
            }
            throw;
        }
        if (!quiet) {
            for (std::size_t k = 0; k < R.diagonal.size(); ++k) {
                out << "d_" << k + 1 << " = " << mono_str(M.vars, R.diagonal[k]) << "\n";
            }
            for (std::size_t k = 0; k < R.quotients.size(); ++k) {
                out << "phi_" << k + 1 << " = " << mono_str(M.vars, R.quotients[k]) << "\n";
            }
        }
        CheckReport v = verify_smith(M, R);
        if (!quiet) {
            out << "certificate: " << (v.passed() ? "pass" : "FAIL") << " (" << v.note << ")\n";
            if (latex) {
                out << "\\mathrm{diag}(";
                for (std::size_t k = 0; k < R.diagonal.size(); ++k) {
                    if (k) out << ", ";
                    out << mono_str(M.vars, R.diagonal[k]);
                }
                out << ")\n";
            }
        }
        return RunResult{v.passed() ? 0 : 1, out.str()};
    } catch (const Error& e) {
        return RunResult{2, std::string("error: ") + e.what() + "\n"};
    }
}

}  // namespace grr
