#include "varic/dsl.hpp"

#include "varic/jet.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace varic {

namespace {

constexpr std::size_t kMaxInput = 1 << 20;
constexpr std::size_t kMaxIdentifier = 64;
constexpr std::size_t kMaxDigits = 40;
constexpr int kMaxNesting = 64;
constexpr int kMaxExponent = 32;
constexpr int kMaxOrderLimit = 12;

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
};

[[noreturn]] void fail(SourcePos pos, const std::string& message) { throw ParseError(pos, message); }

std::vector<Token> lex(std::string_view text)
{
    if (text.size() > kMaxInput) fail({}, "input larger than 1 MiB");
    std::vector<Token> out;
    SourcePos pos;
    std::size_t i = 0;
    const auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.pos = pos;
        if (std::isalpha(c) != 0) {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) != 0 || text[j] == '_')) ++j;
            if (j - i > kMaxIdentifier) fail(pos, "identifier longer than 64 characters");
            t.kind = Tok::Ident;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(c) != 0) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) != 0) ++j;
            if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1])) != 0) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])) != 0) ++j;
            }
            if (j - i > kMaxDigits) fail(pos, "number literal too long");
            t.kind = Tok::Number;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::string_view(";,:()[]{}+-*/^=").find(static_cast<char>(c)) != std::string_view::npos) {
            t.kind = Tok::Punct;
            t.text = std::string(1, static_cast<char>(c));
            advance(1);
        } else if (c >= 0x80) {
            fail(pos, "non-ASCII character outside a comment");
        } else {
            fail(pos, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = pos;
    out.push_back(end);
    return out;
}

const std::vector<std::string> kStatementWords = {"base", "field", "param", "func", "unknown",
                                                  "eq",   "center", "task", "option"};

struct Statement {
    Token keyword;
    std::vector<Token> body;  // ends with the ';' token (kept as terminator)
};

std::vector<Statement> split_statements(const std::vector<Token>& tokens)
{
    std::vector<Statement> out;
    std::size_t i = 0;
    while (tokens[i].kind != Tok::End) {
        const Token& k = tokens[i];
        if (k.kind != Tok::Ident ||
            std::find(kStatementWords.begin(), kStatementWords.end(), k.text) == kStatementWords.end()) {
            fail(k.pos, "expected a statement keyword, found '" + k.text + "'");
        }
        Statement s;
        s.keyword = k;
        ++i;
        int depth = 0;
        for (;;) {
            const Token& t = tokens[i];
            if (t.kind == Tok::End) fail(t.pos, "missing ';' after '" + k.text + "' statement");
            if (t.kind == Tok::Ident && depth <= 0 &&
                std::find(kStatementWords.begin(), kStatementWords.end(), t.text) != kStatementWords.end()) {
                fail(t.pos, "expected ';', found '" + t.text + "'");
            }
            if (t.kind == Tok::Punct) {
                if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
                if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
                if (depth > kMaxNesting) fail(t.pos, "nesting deeper than 64 levels");
                if (t.text == ";" && depth <= 0) {
                    s.body.push_back(t);
                    ++i;
                    break;
                }
            }
            s.body.push_back(t);
            ++i;
        }
        out.push_back(std::move(s));
    }
    return out;
}

class Cursor {
public:
    explicit Cursor(const std::vector<Token>& toks) : toks_(toks) {}

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const
    {
        return toks_[std::min(i_ + ahead, toks_.size() - 1)];
    }
    const Token& next()
    {
        const Token& t = peek();
        if (i_ < toks_.size() - 1) ++i_;
        return t;
    }
    [[nodiscard]] bool is(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
    [[nodiscard]] bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }
    bool accept(const char* punct)
    {
        if (!is(punct)) return false;
        next();
        return true;
    }
    const Token& expect(const char* punct)
    {
        if (!is(punct)) fail(peek().pos, std::string("expected '") + punct + "', found " + describe(peek()));
        return next();
    }
    const Token& expect_ident(const char* what)
    {
        if (peek().kind != Tok::Ident) fail(peek().pos, std::string("expected ") + what + ", found " + describe(peek()));
        return next();
    }
    int expect_int(const char* what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Number || t.text.find('.') != std::string::npos || t.text.size() > 6) {
            fail(t.pos, std::string("expected ") + what + ", found " + describe(t));
        }
        next();
        return std::stoi(t.text);
    }
    void finish()
    {
        if (!is(";")) fail(peek().pos, "expected ';', found " + describe(peek()));
    }

    static std::string describe(const Token& t)
    {
        if (t.kind == Tok::End) return "end of input";
        return "'" + t.text + "'";
    }

private:
    const std::vector<Token>& toks_;
    std::size_t i_ = 0;
};

bool is_reserved(const std::string& s)
{
    const auto& r = reserved_words();
    return std::find(r.begin(), r.end(), s) != r.end();
}

bool single_letter_bases(const JetSpace& s)
{
    return std::all_of(s.base.begin(), s.base.end(), [](const std::string& b) { return b.size() == 1; });
}

class ExprParser {
public:
    ExprParser(Cursor& c, const JetSpace& space) : c_(c), space_(space) {}

    Expr parse()
    {
        depth_ = 0;
        return expr();
    }

private:
    template <class F>
    Expr guarded(SourcePos pos, F&& f)
    {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const MaxOrderExceeded& e) {
            fail(pos, std::string("order overflow: ") + e.what());
        } catch (const Error& e) {
            fail(pos, e.what());
        }
    }

    void enter(SourcePos pos)
    {
        if (++depth_ > kMaxNesting) fail(pos, "expression nested deeper than 64 levels");
    }

    Expr expr()
    {
        enter(c_.peek().pos);
        Expr out = term();
        while (c_.is("+") || c_.is("-")) {
            const Token op = c_.next();
            const Expr rhs = term();
            out = guarded(op.pos, [&] { return op.text == "+" ? out + rhs : out - rhs; });
        }
        --depth_;
        return out;
    }

    Expr term()
    {
        Expr out = unary();
        while (c_.is("*") || c_.is("/")) {
            const Token op = c_.next();
            const Expr rhs = unary();
            out = guarded(op.pos, [&] {
                if (op.text == "*") return out * rhs;
                if (auto q = rhs.as_rational()) {
                    if (*q == 0) throw DomainError("division by zero");
                    return out / *q;
                }
                return divide(out, rhs);
            });
        }
        return out;
    }

    Expr unary()
    {
        if (c_.is("-") || c_.is("+")) {
            const Token op = c_.next();
            enter(op.pos);
            const Expr inner = unary();
            --depth_;
            return op.text == "-" ? -inner : inner;
        }
        return power();
    }

    Expr power()
    {
        const Expr base = primary();
        if (!c_.is("^")) return base;
        const Token op = c_.next();
        int sign = 1;
        const bool paren = c_.accept("(");
        if (c_.accept("-")) sign = -1;
        const Token& num = c_.peek();
        const int n = c_.expect_int("an integer exponent");
        if (n > kMaxExponent) fail(num.pos, "exponent larger than 32");
        if (paren) c_.expect(")");
        return guarded(op.pos, [&] { return pow(base, sign * n); });
    }

    std::vector<Expr> arguments()
    {
        std::vector<Expr> args;
        c_.expect("(");
        if (!c_.is(")")) {
            args.push_back(expr());
            while (c_.accept(",")) args.push_back(expr());
        }
        c_.expect(")");
        return args;
    }

    Expr primary()
    {
        const Token t = c_.peek();
        if (t.kind == Tok::Number) {
            c_.next();
            return Expr(parse_number(t.text));
        }
        if (c_.accept("(")) {
            enter(t.pos);
            const Expr inner = expr();
            c_.expect(")");
            --depth_;
            return inner;
        }
        if (t.kind != Tok::Ident) fail(t.pos, "expected an expression, found " + Cursor::describe(t));
        c_.next();
        const std::string& w = t.text;
        if (w == "D") return total(t);
        if (w == "pd") return partial(t);
        if (w == "exp" || w == "sin" || w == "cos") {
            const auto args = arguments();
            if (args.size() != 1) fail(t.pos, w + " takes one argument");
            return guarded(t.pos, [&] {
                return w == "exp" ? Expr::exp(args[0]) : w == "sin" ? Expr::sin(args[0]) : Expr::cos(args[0]);
            });
        }
        if (is_reserved(w)) fail(t.pos, "reserved word '" + w + "' used as a value");
        if (const int b = space_.base_index(w); b >= 0) return space_.x(static_cast<std::size_t>(b));
        if (space_.find_param(w)) return space_.param(w);
        if (const FunctionDecl* f = space_.find_function(w)) {
            if (!c_.is("(")) return space_.fn(w);
            const auto args = arguments();
            if (args.size() != f->args.size()) {
                fail(t.pos, "function '" + w + "' takes " + std::to_string(f->args.size()) + " arguments");
            }
            return guarded(t.pos, [&] { return Expr::function(w, args); });
        }
        if (space_.field_index(w) >= 0) return space_.u(w);
        return guarded(t.pos, [&] { return jet_sugar(t); });
    }

    Expr jet_sugar(const Token& t)
    {
        const std::string& w = t.text;
        const auto us = w.find('_');
        if (us == std::string::npos || space_.field_index(w.substr(0, us)) < 0) {
            fail(t.pos, "unknown identifier '" + w + "'");
        }
        if (!single_letter_bases(space_)) fail(t.pos, "subscript notation needs single-letter base names; use D[...]");
        const std::string letters = w.substr(us + 1);
        if (letters.empty()) fail(t.pos, "empty derivative subscript in '" + w + "'");
        MultiIndex m(space_.dims());
        for (char ch : letters) {
            const int b = space_.base_index(std::string(1, ch));
            if (b < 0) fail(t.pos, "'" + std::string(1, ch) + "' in '" + w + "' is not a base variable");
            m = m.raised(static_cast<std::size_t>(b));
        }
        if (m.order() > space_.max_order) {
            fail(t.pos, "order overflow: '" + w + "' exceeds max_order " + std::to_string(space_.max_order));
        }
        return space_.u(static_cast<std::size_t>(space_.field_index(w.substr(0, us))), m);
    }

    Expr total(const Token& t)
    {
        c_.expect("[");
        enter(t.pos);
        const Expr inner = expr();
        MultiIndex m(space_.dims());
        while (c_.accept(",")) {
            int count = 1;
            const bool braced = c_.accept("{");
            const Token& name = c_.expect_ident("a base variable");
            const int b = space_.base_index(name.text);
            if (b < 0) fail(name.pos, "'" + name.text + "' is not a base variable");
            if (braced) {
                c_.expect(",");
                const Token& num = c_.peek();
                count = c_.expect_int("a derivative count");
                if (count > kMaxOrderLimit) fail(num.pos, "derivative count too large");
                c_.expect("}");
            }
            for (int k = 0; k < count; ++k) m = m.raised(static_cast<std::size_t>(b));
        }
        c_.expect("]");
        --depth_;
        if (m.order() == 0) fail(t.pos, "D[...] needs at least one direction");
        if (m.order() > space_.max_order) {
            fail(t.pos, "order overflow: derivative order exceeds max_order " + std::to_string(space_.max_order));
        }
        return guarded(t.pos, [&] { return total_derivative(inner, m, space_); });
    }

    Expr partial(const Token& t)
    {
        c_.expect("(");
        const Token& name = c_.expect_ident("a function name");
        const FunctionDecl* f = space_.find_function(name.text);
        if (f == nullptr) fail(name.pos, "'" + name.text + "' is not a declared function");
        std::vector<int> deriv(f->args.size(), 0);
        int total_order = 0;
        while (c_.accept(",")) {
            const Token& at = c_.peek();
            const Expr v = expr();
            const auto it = std::find(f->args.begin(), f->args.end(), v);
            if (it == f->args.end()) fail(at.pos, "not an argument of '" + name.text + "'");
            ++deriv[static_cast<std::size_t>(it - f->args.begin())];
            if (++total_order > kMaxOrderLimit) fail(at.pos, "too many partial derivatives");
        }
        c_.expect(")");
        if (total_order == 0) fail(t.pos, "pd(...) needs at least one variable");
        std::vector<Expr> args = f->args;
        if (c_.is("(")) {
            args = arguments();
            if (args.size() != f->args.size()) {
                fail(t.pos, "function '" + name.text + "' takes " + std::to_string(f->args.size()) + " arguments");
            }
        }
        return guarded(t.pos, [&] { return Expr::function(name.text, args, deriv); });
    }

    static Rational parse_number(const std::string& s)
    {
        const auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(mpz_class(s, 10));
        const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        mpz_class den = 1;
        for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
        Rational q(mpz_class(digits, 10), den);
        q.canonicalize();
        return q;
    }

    Cursor& c_;
    const JetSpace& space_;
    int depth_ = 0;
};

struct Builder {
    Problem p;
    std::set<std::string> names;

    void declare(const Token& t, const char* what)
    {
        if (is_reserved(t.text)) fail(t.pos, "reserved word '" + t.text + "' cannot name a " + what);
        if (!names.insert(t.text).second) fail(t.pos, "'" + t.text + "' is already declared");
    }
};

void base_statement(Cursor& c, Builder& b)
{
    do {
        const Token& t = c.expect_ident("a base variable name");
        if (t.text.find('_') != std::string::npos) fail(t.pos, "base variable names cannot contain '_'");
        b.declare(t, "base variable");
        b.p.space.base.push_back(t.text);
    } while (c.accept(","));
    c.finish();
}

void field_statement(Cursor& c, Builder& b)
{
    do {
        const Token& t = c.expect_ident("a field name");
        if (t.text.find('_') != std::string::npos) fail(t.pos, "field names cannot contain '_'");
        b.declare(t, "field");
        if (c.accept("(")) {
            std::vector<std::string> args;
            if (!c.is(")")) {
                do args.push_back(c.expect_ident("a base variable").text);
                while (c.accept(","));
            }
            const Token& close = c.expect(")");
            if (args != b.p.space.base) fail(close.pos, "field '" + t.text + "' must depend on all base variables in order");
        }
        b.p.space.fields.push_back(t.text);
    } while (c.accept(","));
    c.finish();
}

void param_statement(Cursor& c, Builder& b)
{
    do {
        const Token& t = c.expect_ident("a parameter name");
        b.declare(t, "parameter");
        bool nonzero = false;
        if (c.is_word("nonzero")) {
            c.next();
            nonzero = true;
        }
        b.p.space.add_param(t.text, nonzero);
    } while (c.accept(","));
    c.finish();
}

void option_statement(Cursor& c, Builder& b, const ParseOverrides& ov)
{
    const Token& name = c.expect_ident("an option name");
    const Token& value = c.peek();
    Options& o = b.p.options;
    const auto bounded = [&](int lo, int hi) {
        const int v = c.expect_int("an integer");
        if (v < lo || v > hi) {
            fail(value.pos, "option " + name.text + " must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return v;
    };
    if (name.text == "max_order") {
        o.max_order = bounded(1, kMaxOrderLimit);
    } else if (name.text == "degree") {
        o.degree = bounded(0, 6);
    } else if (name.text == "order") {
        o.order = bounded(0, kMaxOrderLimit);
    } else if (name.text == "cap") {
        o.cap = bounded(1, 100000);
    } else if (name.text == "on_solutions") {
        if (c.is_word("true")) o.on_solutions = true;
        else if (c.is_word("false")) o.on_solutions = false;
        else fail(value.pos, "expected true or false");
        c.next();
    } else {
        fail(name.pos, "unknown option '" + name.text + "'");
    }
    c.finish();
    if (ov.max_order) o.max_order = *ov.max_order;
}

void function_statement(Cursor& c, Builder& b, bool unknown)
{
    do {
        const Token& t = c.expect_ident("a function name");
        b.declare(t, "function");
        std::vector<Expr> args;
        if (c.is("(")) {
            c.next();
            if (!c.is(")")) {
                do {
                    const Token& at = c.peek();
                    ExprParser ep(c, b.p.space);
                    const Expr a = ep.parse();
                    const auto atom = a.as_atom();
                    if (!atom || (atom->kind != AtomKind::Base && atom->kind != AtomKind::Jet)) {
                        fail(at.pos, "function arguments must be base variables or jet coordinates");
                    }
                    if (std::find(args.begin(), args.end(), a) != args.end()) fail(at.pos, "repeated argument");
                    args.push_back(a);
                } while (c.accept(","));
            }
            c.expect(")");
        }
        b.p.space.add_function(t.text, std::move(args), unknown);
    } while (c.accept(","));
    c.finish();
}

std::vector<Expr> expr_list(Cursor& c, const JetSpace& s, const char* open, const char* close)
{
    std::vector<Expr> out;
    c.expect(open);
    do {
        ExprParser ep(c, s);
        out.push_back(ep.parse());
    } while (c.accept(","));
    c.expect(close);
    return out;
}

void task_statement(Cursor& c, Builder& b)
{
    const Token& t = c.expect_ident("a task name");
    Task& task = b.p.task;
    const JetSpace& s = b.p.space;
    if (t.text == "check") {
        task.kind = TaskKind::Check;
    } else if (t.text == "lagrangian") {
        task.kind = TaskKind::Lagrangian;
    } else if (t.text == "helmholtz") {
        task.kind = TaskKind::Helmholtz;
    } else if (t.text == "representatives") {
        task.kind = TaskKind::Representatives;
    } else if (t.text == "multiplier") {
        task.kind = TaskKind::Multiplier;
        const std::size_t n = s.field_count();
        if (c.is_word("diag")) {
            const Token& w = c.next();
            task.entries = expr_list(c, s, "(", ")");
            if (task.entries.size() != n) fail(w.pos, "diag(...) needs one entry per field");
        } else if (c.is_word("matrix")) {
            const Token& w = c.next();
            task.matrix = true;
            c.expect("[");
            std::size_t rows = 0;
            do {
                const auto row = expr_list(c, s, "[", "]");
                if (row.size() != n) fail(w.pos, "each matrix row needs one entry per field");
                task.entries.insert(task.entries.end(), row.begin(), row.end());
                ++rows;
            } while (c.accept(","));
            c.expect("]");
            if (rows != n) fail(w.pos, "matrix[...] needs one row per field");
        } else {
            fail(c.peek().pos, "expected diag(...) or matrix[...]");
        }
    } else if (t.text == "nonlinear") {
        task.kind = TaskKind::Nonlinear;
        if (c.is("(")) {
            const Token& open = c.peek();
            task.entries = expr_list(c, s, "(", ")");
            if (task.entries.size() != s.field_count()) fail(open.pos, "nonlinear(...) needs one entry per field");
        }
    } else {
        fail(t.pos, "unknown task '" + t.text + "'");
    }
    c.finish();
}

std::vector<std::pair<std::size_t, Expr>> center_statement(Cursor& c, const JetSpace& s)
{
    const Token& f = c.expect_ident("a field name");
    const int idx = s.field_index(f.text);
    if (idx < 0) fail(f.pos, "'" + f.text + "' is not a field");
    c.expect("=");
    const Token& at = c.peek();
    ExprParser ep(c, s);
    const Expr e = ep.parse();
    if (jet_order(e) >= 0) fail(at.pos, "a center may depend on base variables and parameters only");
    for (const Atom& a : atoms(e)) {
        if (a.kind == AtomKind::Function) fail(at.pos, "a center may depend on base variables and parameters only");
    }
    c.finish();
    return {{static_cast<std::size_t>(idx), e}};
}

bool contains_unknown(const Expr& e, const JetSpace& s)
{
    for (const Atom& a : atoms(e)) {
        if (a.kind == AtomKind::Function) {
            const FunctionDecl* f = s.find_function(a.name);
            if (f != nullptr && f->unknown) return true;
        }
    }
    return false;
}

std::string join(const std::vector<std::string>& v, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i == 0 ? "" : sep) + v[i];
    return out;
}

}  // namespace

const std::vector<std::string>& reserved_words()
{
    static const std::vector<std::string> words = {"base", "field", "param", "func",    "unknown", "eq",
                                                   "center", "task", "option", "nonzero", "D",       "pd",
                                                   "exp",  "sin",   "cos",    "diag",    "matrix"};
    return words;
}

std::string to_string(TaskKind t)
{
    switch (t) {
    case TaskKind::Check: return "check";
    case TaskKind::Lagrangian: return "lagrangian";
    case TaskKind::Multiplier: return "multiplier";
    case TaskKind::Nonlinear: return "nonlinear";
    case TaskKind::Helmholtz: return "helmholtz";
    case TaskKind::Representatives: return "representatives";
    }
    return "check";
}

std::vector<Expr> Problem::equation_exprs() const
{
    std::vector<Expr> out;
    for (const auto& e : equations) out.push_back(e.expr);
    return out;
}

bool operator==(const Problem& a, const Problem& b)
{
    const JetSpace& x = a.space;
    const JetSpace& y = b.space;
    if (x.base != y.base || x.fields != y.fields || x.max_order != y.max_order) return false;
    if (x.params.size() != y.params.size() || x.functions.size() != y.functions.size()) return false;
    for (std::size_t i = 0; i < x.params.size(); ++i) {
        if (x.params[i].name != y.params[i].name || x.params[i].nonzero != y.params[i].nonzero) return false;
    }
    for (std::size_t i = 0; i < x.functions.size(); ++i) {
        const auto& f = x.functions[i];
        const auto& g = y.functions[i];
        if (f.name != g.name || f.unknown != g.unknown || f.args != g.args) return false;
    }
    return a.equations == b.equations && a.center == b.center && a.task == b.task && a.options == b.options;
}

Problem parse(std::string_view text, const ParseOverrides& overrides)
{
    const std::vector<Token> tokens = lex(text);
    const std::vector<Statement> statements = split_statements(tokens);
    const SourcePos end = tokens.back().pos;

    const auto of_kind = [&](const char* k) {
        std::vector<const Statement*> out;
        for (const auto& s : statements) {
            if (s.keyword.text == k) out.push_back(&s);
        }
        return out;
    };
    const auto tasks = of_kind("task");
    if (tasks.empty()) fail(end, "no task");
    if (tasks.size() > 1) fail(tasks[1]->keyword.pos, "more than one task");
    const auto bases = of_kind("base");
    if (bases.empty()) fail(statements.front().keyword.pos, "no base variables declared");
    const auto fields = of_kind("field");
    if (fields.empty()) fail(statements.front().keyword.pos, "no fields declared");

    Builder b;
    const auto run = [&](const char* kind, auto&& f) {
        for (const Statement* s : of_kind(kind)) {
            Cursor c(s->body);
            f(c, *s);
        }
    };
    run("base", [&](Cursor& c, const Statement&) { base_statement(c, b); });
    run("field", [&](Cursor& c, const Statement&) { field_statement(c, b); });
    run("param", [&](Cursor& c, const Statement&) { param_statement(c, b); });
    run("option", [&](Cursor& c, const Statement&) { option_statement(c, b, overrides); });
    if (overrides.max_order) {
        if (*overrides.max_order < 1 || *overrides.max_order > kMaxOrderLimit) fail({}, "max order out of range");
        b.p.options.max_order = *overrides.max_order;
    }
    b.p.space.max_order = b.p.options.max_order;
    for (const auto& s : statements) {
        if (s.keyword.text == "func" || s.keyword.text == "unknown") {
            Cursor c(s.body);
            function_statement(c, b, s.keyword.text == "unknown");
        }
    }

    const bool nonlinear_equations = [&] {
        Cursor c(tasks.front()->body);
        return c.is_word("nonlinear") && c.peek(1).kind == Tok::Punct && c.peek(1).text == ";";
    }();
    std::set<std::string> eq_names;
    run("eq", [&](Cursor& c, const Statement& s) {
        const Token& name = c.expect_ident("an equation name");
        if (!eq_names.insert(name.text).second) fail(name.pos, "equation '" + name.text + "' is already defined");
        c.expect(":");
        const Token& at = c.peek();
        ExprParser ep(c, b.p.space);
        const Expr e = ep.parse();
        c.finish();
        if (!nonlinear_equations && contains_unknown(e, b.p.space)) {
            fail(at.pos, "unknown functions may appear in equations only for 'task nonlinear;'");
        }
        if (e.is_zero()) fail(s.keyword.pos, "equation '" + name.text + "' is identically zero");
        b.p.equations.push_back({name.text, e});
    });
    if (b.p.equations.size() != b.p.space.field_count()) {
        fail(b.p.equations.empty() ? end : of_kind("eq").back()->keyword.pos,
             "expected " + std::to_string(b.p.space.field_count()) + " equation(s), one per field");
    }

    const auto centers = of_kind("center");
    if (!centers.empty()) {
        b.p.center.assign(b.p.space.field_count(), Expr());
        std::set<std::size_t> seen;
        for (const Statement* s : centers) {
            Cursor c(s->body);
            for (const auto& [i, e] : center_statement(c, b.p.space)) {
                if (!seen.insert(i).second) fail(s->keyword.pos, "center given twice for one field");
                b.p.center[i] = e;
            }
        }
    }

    Cursor tc(tasks.front()->body);
    task_statement(tc, b);
    if (b.p.task.kind == TaskKind::Representatives && b.p.options.order && *b.p.options.order > b.p.options.max_order) {
        fail(end, "option order exceeds max_order");
    }
    return std::move(b.p);
}

std::vector<Expr> parse_center(std::string_view text, const Problem& p)
{
    const std::vector<Token> tokens = lex(text);
    std::vector<Expr> out(p.space.field_count());
    for (const Statement& s : split_statements(tokens)) {
        if (s.keyword.text != "center") fail(s.keyword.pos, "only center statements are allowed here");
        Cursor c(s.body);
        for (const auto& [i, e] : center_statement(c, p.space)) out[i] = e;
    }
    return out;
}

std::string print(const Problem& p)
{
    const JetSpace& s = p.space;
    std::string out;
    out += "base " + join(s.base, ", ") + ";\n";
    for (const auto& f : s.fields) out += "field " + f + "(" + join(s.base, ", ") + ");\n";
    for (const auto& q : s.params) out += "param " + q.name + (q.nonzero ? " nonzero" : "") + ";\n";
    for (const auto& f : s.functions) {
        out += (f.unknown ? "unknown " : "func ") + f.name;
        if (!f.args.empty()) {
            std::vector<std::string> args;
            for (const auto& a : f.args) args.push_back(to_string(a, s));
            out += "(" + join(args, ", ") + ")";
        }
        out += ";\n";
    }
    const Options& o = p.options;
    if (o.max_order != Options::kDefaultMaxOrder) out += "option max_order " + std::to_string(o.max_order) + ";\n";
    if (o.on_solutions) out += "option on_solutions true;\n";
    if (o.degree != Options::kDefaultDegree) out += "option degree " + std::to_string(o.degree) + ";\n";
    if (o.order) out += "option order " + std::to_string(*o.order) + ";\n";
    if (o.cap != Options::kDefaultCap) out += "option cap " + std::to_string(o.cap) + ";\n";
    for (const auto& e : p.equations) out += "eq " + e.name + ": " + to_string(e.expr, s) + ";\n";
    for (std::size_t i = 0; i < p.center.size(); ++i) {
        out += "center " + s.fields[i] + " = " + to_string(p.center[i], s) + ";\n";
    }
    const auto list = [&](const std::vector<Expr>& v, std::size_t from, std::size_t n) {
        std::vector<std::string> parts;
        for (std::size_t k = from; k < from + n; ++k) parts.push_back(to_string(v[k], s));
        return join(parts, ", ");
    };
    out += "task " + to_string(p.task.kind);
    if (p.task.kind == TaskKind::Multiplier) {
        const std::size_t n = s.field_count();
        if (p.task.matrix) {
            std::vector<std::string> rows;
            for (std::size_t r = 0; r < n; ++r) rows.push_back("[" + list(p.task.entries, r * n, n) + "]");
            out += " matrix[" + join(rows, ", ") + "]";
        } else {
            out += " diag(" + list(p.task.entries, 0, p.task.entries.size()) + ")";
        }
    } else if (p.task.kind == TaskKind::Nonlinear && !p.task.entries.empty()) {
        out += "(" + list(p.task.entries, 0, p.task.entries.size()) + ")";
    }
    out += ";\n";
    return out;
}

}  // namespace varic
