#include "varic/cli.hpp"

#include "varic/dsl.hpp"
#include "varic/homotopy.hpp"
#include "varic/ibp.hpp"
#include "varic/inverse.hpp"
#include "varic/variationality.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

namespace varic::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Settings {
    std::string command;
    std::string file;
    std::string format = "text";
    bool on_solutions = false;
    std::string center_file;
    std::optional<int> max_order;
    std::optional<int> degree;
    std::uint64_t seed = 1;
    bool timing = false;
};

/// Unreadable input files and commands the file cannot serve; usage errors.
struct InputError {
    std::string message;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{"cannot read '" + path + "'"};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string replace_all(std::string s, const std::string& from, const std::string& to)
{
    for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size())) {
        s.replace(at, from.size(), to);
    }
    return s;
}

Json expr_json(const Expr& e, const JetSpace& s)
{
    return Json{{"ascii", to_string(e, s)}, {"latex", to_latex(e, s)}};
}

Json exprs_json(const std::vector<Expr>& es, const JetSpace& s)
{
    Json out = Json::array();
    for (const auto& e : es) out.push_back(expr_json(e, s));
    return out;
}

Json form_json(const FunctionalForm& f, const JetSpace& s)
{
    const std::string text = to_string(f, s);
    const std::string ascii = replace_all(replace_all(text, "\xCE\xB4", "d"), "\xE2\x88\xA7", "^");
    return Json{{"degree", f.degree()}, {"ascii", ascii}, {"text", text}, {"latex", to_latex(f, s)}};
}

Json matrix_json(const LinDiffOpMatrix& m, const JetSpace& s)
{
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& op : row) r.push_back(Json{{"ascii", to_string(op, s)}, {"latex", to_latex(op, s)}});
        rows.push_back(std::move(r));
    }
    return rows;
}

Json strings_json(const std::vector<std::string>& v)
{
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x);
    return out;
}

Json problem_json(const Problem& p)
{
    const JetSpace& s = p.space;
    Json params = Json::array();
    for (const auto& d : s.params) params.push_back(Json{{"name", d.name}, {"nonzero", d.nonzero}});
    Json eqs = Json::array();
    for (const auto& e : p.equations) eqs.push_back(Json{{"name", e.name}, {"expr", expr_json(e.expr, s)}});
    return Json{{"base", strings_json(s.base)},
                {"fields", strings_json(s.fields)},
                {"params", params},
                {"equations", eqs},
                {"center", exprs_json(p.center, s)},
                {"options",
                 {{"max_order", p.options.max_order},
                  {"on_solutions", p.options.on_solutions},
                  {"degree", p.options.degree}}}};
}

Json verdict_json(const Verdict& v, bool on_solutions, const JetSpace& s)
{
    return Json{{"variational", v.variational},
                {"on_solutions", on_solutions},
                {"residual", matrix_json(v.residual, s)},
                {"obstruction", v.variational ? Json(nullptr) : form_json(v.obstruction, s)},
                {"notes", strings_json(v.notes)}};
}

Json ledger_json(const DivergenceLedger& ledger, const JetSpace& s)
{
    Json out = Json::array();
    for (const auto& entry : ledger) {
        out.push_back(Json{{"direction", s.base[entry.direction]}, {"density", form_json(entry.density, s)}});
    }
    return out;
}

/// Random-evaluation corroboration of a reconstructed Lagrangian: the
/// Gateaux derivative must equal the pairing with the equations on [0,1]^n.
Json corroborate(const Expr& lagrangian, const std::vector<Expr>& equations, const JetSpace& s, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    Json out{{"method", "gateaux"}, {"seed", seed}};
    Assignment values;
    for (const auto& d : s.params) {
        int num = pick(-4, 4);
        if (num == 0) num = 1;
        values[*s.param(d.name).as_atom()] = Rational(num, pick(1, 3));
    }
    const int order = std::max(1, jet_order(lagrangian));
    Expr bump(1);
    for (std::size_t i = 0; i < s.dims(); ++i) bump *= pow(s.x(i) * (1 - s.x(i)), order);
    std::vector<Expr> phi;
    std::vector<Expr> eta;
    for (std::size_t a = 0; a < s.field_count(); ++a) {
        Expr p(pick(-3, 3));
        for (std::size_t i = 0; i < s.dims(); ++i) {
            p += pick(-3, 3) * s.x(i);
            if (s.dims() <= 2) p += pick(-3, 3) * pow(s.x(i), 2);
        }
        phi.push_back(p);
        int c0 = pick(-3, 3);
        if (c0 == 0) c0 = 1;
        eta.push_back((c0 + pick(-3, 3) * s.x(0)) * bump);
    }
    const std::vector<std::pair<Rational, Rational>> box(s.dims(), {Rational(0), Rational(1)});
    try {
        const GateauxReport r = gateaux_check(lagrangian, equations, phi, eta, box, values, s);
        out["performed"] = true;
        out["ok"] = r.ok;
        out["exact"] = r.exact;
    } catch (const InvariantBreach&) {
        throw;
    } catch (const Error& e) {
        // Arbitrary given functions and the like cannot be evaluated.
        out["performed"] = false;
        out["reason"] = e.what();
    }
    return out;
}

void check_corroboration(const Json& c)
{
    if (c.value("performed", false) && !c.value("ok", false)) {
        throw InvariantBreach("reconstructed Lagrangian failed the Gateaux pairing check");
    }
}

struct Outcome {
    Json doc;
    int code = kSuccess;
};

void set_status(Outcome& o, const std::string& status, int code)
{
    o.doc["status"] = status;
    o.doc["exit_code"] = code;
    o.code = code;
}

void run_check(const Problem& p, Outcome& o)
{
    const Verdict v = is_variational(p.equation_exprs(), p.space, p.options.on_solutions);
    o.doc["verdict"] = verdict_json(v, p.options.on_solutions, p.space);
    set_status(o, v.variational ? "variational" : "not-variational", v.variational ? kSuccess : kNegative);
}

void run_helmholtz(const Problem& p, Outcome& o)
{
    run_check(p, o);
    Json hc{{"applicable", false}};
    try {
        const SecondOrderHC c = second_order_HC(p.equation_exprs(), p.space);
        Json conds = Json::array();
        for (const auto& h : c.symmetrized) {
            conds.push_back(Json{{"family", h.family},
                                 {"i", p.space.fields[h.i]},
                                 {"j", p.space.fields[h.j]},
                                 {"value", expr_json(h.value, p.space)}});
        }
        hc = Json{{"applicable", true}, {"satisfied", c.satisfied()}, {"conditions", conds}};
    } catch (const DomainError& e) {
        hc["reason"] = e.what();
    }
    o.doc["second_order"] = hc;
}

void run_lagrangian(const Problem& p, const Settings& st, Outcome& o)
{
    const auto eqs = p.equation_exprs();
    const Verdict v = is_variational(eqs, p.space);
    o.doc["verdict"] = verdict_json(v, false, p.space);
    if (!v.variational) {
        set_status(o, "not-variational", kNegative);
        return;
    }
    const LagrangianResult r = lagrangian_from_euler(eqs, p.center, p.space);
    o.doc["lagrangian"] = Json{{"raw", expr_json(r.raw, p.space)},
                               {"reduced", expr_json(r.lagrangian, p.space)},
                               {"ledger", ledger_json(r.ledger, p.space)}};
    const Json c = corroborate(r.lagrangian, eqs, p.space, st.seed);
    o.doc["corroboration"] = c;
    check_corroboration(c);
    set_status(o, "variational", kSuccess);
}

std::string kind_name(AnsatzKind k)
{
    switch (k) {
    case AnsatzKind::MultiplierDiagonal: return "multiplier-diagonal";
    case AnsatzKind::MultiplierMatrix: return "multiplier-matrix";
    case AnsatzKind::Nonlinear: return "nonlinear";
    }
    return "";
}

void run_inverse(const Problem& p, const Settings& st, Outcome& o)
{
    const auto eqs = p.equation_exprs();
    DeterminingSystem sys;
    if (st.command == "multiplier") {
        if (p.task.kind != TaskKind::Multiplier) {
            throw InputError{st.file + ": the multiplier command needs 'task multiplier diag(...)' or 'matrix[...]'"};
        }
        const Ansatz a{p.task.matrix ? AnsatzKind::MultiplierMatrix : AnsatzKind::MultiplierDiagonal, p.task.entries,
                       p.options.degree};
        sys = multiplier_conditions(eqs, a, p.space, p.options.on_solutions);
    } else {
        std::vector<Expr> entries;
        if (p.task.kind == TaskKind::Nonlinear) entries = p.task.entries;
        const Ansatz a{AnsatzKind::Nonlinear, entries, p.options.degree};
        sys = nonlinear_conditions(eqs, a, p.space, p.options.on_solutions);
    }
    Json conds = Json::array();
    for (const auto& c : sys.conditions) {
        conds.push_back(Json{{"expr", expr_json(c.expr, sys.space)}, {"origin", c.origin}});
    }
    o.doc["determining_system"] = Json{{"kind", kind_name(sys.kind)},
                                       {"degree", sys.degree},
                                       {"on_solutions", sys.on_solutions},
                                       {"unknowns", strings_json(sys.unknowns)},
                                       {"transformed", exprs_json(sys.transformed, sys.space)},
                                       {"conditions", conds}};

    const SolutionReport r = solve_determining(sys);
    const JetSpace& s = r.space;
    Json bindings = Json::array();
    for (const auto& [name, value] : r.bindings) bindings.push_back(Json{{"name", name}, {"value", expr_json(value, s)}});
    Json remaining = Json::array();
    for (const auto& c : r.remaining) remaining.push_back(Json{{"expr", expr_json(c.expr, s)}, {"origin", c.origin}});
    o.doc["solutions"] = Json{{"status", to_string(r.status)},
                              {"bindings", bindings},
                              {"free_constants", strings_json(r.free_constants)},
                              {"nonzero", strings_json(r.nonzero)},
                              {"determinant", r.determinant ? expr_json(*r.determinant, s) : Json(nullptr)},
                              {"transformed", exprs_json(r.transformed, s)},
                              {"remaining", remaining},
                              {"notes", strings_json(r.notes)}};

    switch (r.status) {
    case SolveStatus::NoNontrivialSolution:
        set_status(o, to_string(r.status), kNegative);
        return;
    case SolveStatus::Unsolved:
        set_status(o, to_string(r.status), kUnsolved);
        return;
    case SolveStatus::Solved:
        break;
    }
    try {
        const LagrangianResult l = lagrangian_from_euler(r.transformed, p.center, s);
        o.doc["lagrangian"] = Json{{"raw", expr_json(l.raw, s)},
                                   {"reduced", expr_json(l.lagrangian, s)},
                                   {"ledger", ledger_json(l.ledger, s)}};
        const Json c = corroborate(l.lagrangian, r.transformed, s, st.seed);
        o.doc["corroboration"] = c;
        check_corroboration(c);
    } catch (const NotVariational&) {
        // Variational only on solutions: no Lagrangian for the identity.
        o.doc["lagrangian"] = nullptr;
        o.doc["notes"].push_back("transformed system is variational only on solutions; no Lagrangian reconstructed");
    }
    set_status(o, to_string(r.status), kSuccess);
}

void run_representatives(const Problem& p, Outcome& o)
{
    const int order = p.options.order.value_or(p.space.max_order);
    const FunctionalForm f = FunctionalForm::euler_form(p.equation_exprs(), p.space);
    Json rep{{"order", order}, {"cap", p.options.cap}};
    try {
        const auto members = enumerate_representatives(f, order, p.space, static_cast<std::size_t>(p.options.cap));
        Json list = Json::array();
        for (const auto& m : members) list.push_back(form_json(m, p.space));
        rep["complete"] = true;
        rep["members"] = list;
        o.doc["representatives"] = rep;
        set_status(o, "enumerated", kSuccess);
    } catch (const LimitExceeded& e) {
        rep["complete"] = false;
        rep["members"] = Json::array();
        o.doc["representatives"] = rep;
        o.doc["notes"].push_back(e.what());
        set_status(o, "limit-exceeded", kUnsolved);
    }
}

// ---------------------------------------------------------------------------
// Rendering

void render_text(const Json& d, std::ostream& out)
{
    const auto ascii = [](const Json& e) { return e.at("ascii").get<std::string>(); };
    out << d["command"].get<std::string>() << " " << d["file"].get<std::string>() << ": "
        << d["status"].get<std::string>() << "\n";
    for (const auto& e : d["problem"]["equations"]) {
        out << "  " << e["name"].get<std::string>() << ": " << ascii(e["expr"]) << " = 0\n";
    }
    if (d.contains("verdict")) {
        const Json& v = d["verdict"];
        const auto& fields = d["problem"]["fields"];
        out << "residual" << (v["on_solutions"].get<bool>() ? " (on solutions)" : "") << ":\n";
        for (std::size_t a = 0; a < v["residual"].size(); ++a) {
            for (std::size_t b = 0; b < v["residual"][a].size(); ++b) {
                out << "  R[" << fields[a].get<std::string>() << "][" << fields[b].get<std::string>()
                    << "] = " << ascii(v["residual"][a][b]) << "\n";
            }
        }
        if (!v["obstruction"].is_null()) out << "obstruction: " << v["obstruction"]["text"].get<std::string>() << "\n";
        for (const auto& n : v["notes"]) out << "note: " << n.get<std::string>() << "\n";
    }
    if (d.contains("second_order")) {
        const Json& h = d["second_order"];
        if (h["applicable"].get<bool>()) {
            out << "second-order conditions" << (h["satisfied"].get<bool>() ? " (satisfied)" : "") << ":\n";
            for (const auto& c : h["conditions"]) {
                out << "  family " << c["family"].get<int>() << " [" << c["i"].get<std::string>() << "]["
                    << c["j"].get<std::string>() << "]: " << ascii(c["value"]) << "\n";
            }
        } else {
            out << "second-order conditions: not applicable (" << h["reason"].get<std::string>() << ")\n";
        }
    }
    if (d.contains("determining_system")) {
        const Json& sys = d["determining_system"];
        out << "determining system (" << sys["kind"].get<std::string>() << "):\n";
        for (const auto& c : sys["conditions"]) {
            out << "  " << ascii(c["expr"]) << " = 0    [" << c["origin"].get<std::string>() << "]\n";
        }
    }
    if (d.contains("solutions")) {
        const Json& s = d["solutions"];
        if (!s["bindings"].empty()) out << "solution:\n";
        for (const auto& b : s["bindings"]) out << "  " << b["name"].get<std::string>() << " = " << ascii(b["value"]) << "\n";
        if (!s["free_constants"].empty()) {
            out << "free constants:";
            for (const auto& c : s["free_constants"]) out << " " << c.get<std::string>();
            out << "\n";
        }
        if (!s["nonzero"].empty()) {
            out << "nonzero:";
            for (const auto& c : s["nonzero"]) out << " " << c.get<std::string>();
            out << "\n";
        }
        if (!s["determinant"].is_null()) out << "det = " << ascii(s["determinant"]) << "\n";
        for (const auto& n : s["notes"]) out << "note: " << n.get<std::string>() << "\n";
    }
    if (d.contains("lagrangian") && !d["lagrangian"].is_null()) {
        out << "L = " << ascii(d["lagrangian"]["reduced"]) << "\n";
        if (d["lagrangian"]["raw"] != d["lagrangian"]["reduced"]) {
            out << "  (homotopy output " << ascii(d["lagrangian"]["raw"]) << ")\n";
        }
    }
    if (d.contains("representatives")) {
        for (const auto& m : d["representatives"]["members"]) out << "  " << m["text"].get<std::string>() << "\n";
    }
    for (const auto& n : d["notes"]) out << "note: " << n.get<std::string>() << "\n";
    if (d.contains("timing")) out << "time: " << d["timing"]["milliseconds"].get<double>() << " ms\n";
}

void render_latex(const Json& d, std::ostream& out)
{
    const auto tex = [](const Json& e) { return e.at("latex").get<std::string>(); };
    out << "% " << d["command"].get<std::string>() << " " << d["file"].get<std::string>() << ": "
        << d["status"].get<std::string>() << "\n";
    for (const auto& e : d["problem"]["equations"]) {
        out << "\\[ " << tex(e["expr"]) << " = 0 \\]\n";
    }
    if (d.contains("verdict") && !d["verdict"]["obstruction"].is_null()) {
        out << "\\[ \\rho\\,\\mathcal{E} \\simeq " << tex(d["verdict"]["obstruction"]) << " \\]\n";
    }
    if (d.contains("determining_system")) {
        for (const auto& c : d["determining_system"]["conditions"]) out << "\\[ " << tex(c["expr"]) << " = 0 \\]\n";
    }
    if (d.contains("solutions")) {
        for (const auto& b : d["solutions"]["bindings"]) {
            out << "\\[ " << b["name"].get<std::string>() << " = " << tex(b["value"]) << " \\]\n";
        }
    }
    if (d.contains("lagrangian") && !d["lagrangian"].is_null()) {
        out << "\\[ L = " << tex(d["lagrangian"]["reduced"]) << " \\]\n";
    }
    if (d.contains("representatives")) {
        for (const auto& m : d["representatives"]["members"]) out << "\\[ " << tex(m) << " \\]\n";
    }
}

int parse_args(const std::vector<std::string>& args, Settings& st, std::ostream& out, std::ostream& err,
               bool& done)
{
    CLI::App app{"Variational analysis of differential equations", "varic"};
    app.add_option("command", st.command, "check | lagrangian | multiplier | nonlinear | helmholtz | representatives")
        ->required()
        ->check(CLI::IsMember({"check", "lagrangian", "multiplier", "nonlinear", "helmholtz", "representatives"}));
    app.add_option("file", st.file, "problem file (.vp)")->required();
    app.add_option("--format", st.format, "output format")->check(CLI::IsMember({"text", "json", "latex"}));
    app.add_flag("--on-solutions", st.on_solutions, "restrict to the solutions of the equations");
    app.add_option("--center", st.center_file, "file with 'center <field> = <expr>;' statements");
    app.add_option("--max-order", st.max_order, "maximal jet order")->check(CLI::Range(1, 12));
    app.add_option("--degree", st.degree, "degree of the nonlinear ansatz")->check(CLI::Range(0, 6));
    app.add_option("--seed", st.seed, "seed for the random corroboration");
    app.add_flag("--timing", st.timing, "add wall-clock timing to the output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        done = true;
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "varic: " << e.what() << "\n";
        err << "usage: varic <command> <file.vp> [--format text|json|latex] [--on-solutions] [--center FILE] "
               "[--max-order N] [--degree N] [--seed N] [--timing]\n";
        done = true;
        return kUsage;
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Settings st;
    bool done = false;
    const int usage = parse_args(args, st, out, err, done);
    if (done) return usage;

    const auto start = std::chrono::steady_clock::now();
    std::string where = st.file;
    try {
        ParseOverrides ov;
        ov.max_order = st.max_order;
        Problem p = parse(read_file(st.file), ov);
        if (st.on_solutions) p.options.on_solutions = true;
        if (st.degree) p.options.degree = *st.degree;
        if (!st.center_file.empty()) {
            where = st.center_file;
            p.center = parse_center(read_file(st.center_file), p);
            where = st.file;
        }

        Outcome o;
        o.doc = Json{{"schema_version", kSchemaVersion},
                     {"command", st.command},
                     {"file", st.file},
                     {"status", ""},
                     {"exit_code", 0},
                     {"problem", problem_json(p)},
                     {"notes", Json::array()}};
        if (st.command == "check") {
            run_check(p, o);
        } else if (st.command == "helmholtz") {
            run_helmholtz(p, o);
        } else if (st.command == "lagrangian") {
            run_lagrangian(p, st, o);
        } else if (st.command == "representatives") {
            run_representatives(p, o);
        } else {
            run_inverse(p, st, o);
        }
        if (st.timing) {
            const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
            o.doc["timing"] = Json{{"milliseconds", ms.count()}};
        }

        if (st.format == "json") {
            out << o.doc.dump(2) << "\n";
        } else if (st.format == "latex") {
            render_latex(o.doc, out);
        } else {
            render_text(o.doc, out);
        }
        return o.code;
    } catch (const InputError& e) {
        err << "varic: " << e.message << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << where << ":" << e.what() << "\n";
        return kDataError;
    } catch (const InvariantBreach& e) {
        err << "varic: internal check failed: " << e.what() << "\n";
        return kInternal;
    } catch (const Error& e) {
        err << where << ": " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "varic: internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace varic::cli
