#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "varic/cli.hpp"
#include "varic/dsl.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using varic::cli::run;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

// Runs inside the corpus directory so file names in the output stay relative.
Result invoke(std::vector<std::string> args)
{
    const fs::path here = fs::current_path();
    fs::current_path(VARIC_CORPUS_DIR);
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = run(args, out, err);
    fs::current_path(here);
    r.out = out.str();
    r.err = err.str();
    return r;
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> corpus_names()
{
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(VARIC_CORPUS_DIR)) {
        if (e.path().extension() == ".vp") out.push_back(e.path().filename().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Every object carrying an "ascii" rendering must also carry "latex".
void check_dual_rendering(const nlohmann::json& j, int& exprs)
{
    if (j.is_object()) {
        if (j.contains("ascii")) {
            ++exprs;
            CHECK(j.contains("latex"));
        }
        for (const auto& [k, v] : j.items()) check_dual_rendering(v, exprs);
    } else if (j.is_array()) {
        for (const auto& v : j) check_dual_rendering(v, exprs);
    }
}

}  // namespace

TEST_CASE("exit-code contract over the corpus")
{
    // file, command, exit code, status
    const std::vector<std::tuple<std::string, std::string, int, std::string>> table = {
        {"sho.vp", "lagrangian", 0, "variational"},
        {"sho.vp", "check", 0, "variational"},
        {"damped_check.vp", "check", 1, "not-variational"},
        {"damped.vp", "multiplier", 0, "solved"},
        {"damped.vp", "lagrangian", 1, "not-variational"},
        {"damped_helmholtz.vp", "helmholtz", 1, "not-variational"},
        {"exp_damped_lagrangian.vp", "lagrangian", 0, "variational"},
        {"heat.vp", "check", 1, "not-variational"},
        {"heat_representatives.vp", "representatives", 0, "enumerated"},
        {"first_order.vp", "multiplier", 1, "no-nontrivial-solution"},
        {"point.vp", "multiplier", 0, "solved"},
        {"line.vp", "multiplier", 0, "solved"},
        {"sonin.vp", "multiplier", 2, "unsolved"},
        {"sonin.vp", "check", 1, "not-variational"},
        {"nonlinear_point.vp", "nonlinear", 0, "solved"},
        {"circles.vp", "nonlinear", 0, "solved"},
        {"circles_lagrangian.vp", "lagrangian", 0, "variational"},
        {"autonomous.vp", "check", 1, "not-variational"},
        {"wave.vp", "lagrangian", 0, "variational"},
    };
    for (const auto& [file, command, code, status] : table) {
        INFO(command << " " << file);
        const Result r = invoke({command, file, "--format", "json"});
        CHECK(r.code == code);
        CHECK(r.err.empty());
        const auto j = json_of(r);
        CHECK(j["status"] == status);
        CHECK(j["exit_code"] == code);
    }

    // Every file answers its own task with a contract code, in every format.
    for (const auto& name : corpus_names()) {
        const varic::Problem p = varic::parse(read_file(fs::path(VARIC_CORPUS_DIR) / name));
        for (const char* format : {"text", "json", "latex"}) {
            INFO(name << " " << format);
            const Result r = invoke({varic::to_string(p.task.kind), name, "--format", format});
            CHECK((r.code == 0 || r.code == 1 || r.code == 2));
            CHECK_FALSE(r.out.empty());
        }
    }
}

TEST_CASE("documented examples")
{
    const Result heat = invoke({"check", "heat.vp"});
    CHECK(heat.code == 1);
    CHECK(heat.out.find("obstruction: \xCE\xB4u_t \xE2\x88\xA7 \xCE\xB4u") != std::string::npos);

    const Result sho = invoke({"lagrangian", "sho.vp", "--format", "latex"});
    CHECK(sho.code == 0);
    CHECK(sho.out.find("L = -\\frac{1}{2} {u}_{t}^{2} + \\frac{1}{2} u^{2}") != std::string::npos);

    const Result damped = invoke({"multiplier", "damped.vp", "--format", "json"});
    CHECK(damped.code == 0);
    const auto j = json_of(damped);
    REQUIRE(j["solutions"]["bindings"].size() == 1);
    CHECK(j["solutions"]["bindings"][0]["name"] == "lambda");
    CHECK(j["solutions"]["bindings"][0]["value"]["ascii"] == "C1*exp(t*b)");
    CHECK(j["solutions"]["nonzero"] == nlohmann::json::array({"C1"}));
    CHECK(j["determining_system"]["conditions"][0]["expr"]["ascii"] == "pd(lambda, t) - b*lambda");
    CHECK(j["lagrangian"]["reduced"]["ascii"] == "-1/2*C1*u_t^2*exp(t*b) + 1/2*C1*u^2*exp(t*b)");
    CHECK(j["corroboration"]["performed"] == true);
    CHECK(j["corroboration"]["ok"] == true);
}

TEST_CASE("json documents")
{
    for (const auto& name : corpus_names()) {
        for (const char* command : {"check", "lagrangian", "helmholtz", "representatives"}) {
            INFO(command << " " << name);
            const Result a = invoke({command, name, "--format", "json", "--seed", "7"});
            const Result b = invoke({command, name, "--format", "json", "--seed", "7"});
            CHECK(a.out == b.out);
            const auto j = json_of(a);
            CHECK(j["schema_version"] == varic::cli::kSchemaVersion);
            CHECK(j["command"] == command);
            CHECK_FALSE(j.contains("timing"));
            int exprs = 0;
            check_dual_rendering(j, exprs);
            CHECK(exprs > 0);
        }
    }
    const auto timed = json_of(invoke({"check", "sho.vp", "--format", "json", "--timing"}));
    CHECK(timed["timing"]["milliseconds"].get<double>() >= 0);

    // The seed only moves the corroboration sample.
    auto s1 = json_of(invoke({"lagrangian", "sho.vp", "--format", "json", "--seed", "1"}));
    auto s2 = json_of(invoke({"lagrangian", "sho.vp", "--format", "json", "--seed", "2"}));
    CHECK(s1["corroboration"]["seed"] == 1);
    s1.erase("corroboration");
    s2.erase("corroboration");
    CHECK(s1 == s2);
}

TEST_CASE("golden outputs")
{
    const fs::path dir = fs::path(VARIC_GOLDEN_DIR);
    const bool update = std::getenv("VARIC_UPDATE_GOLDEN") != nullptr;
    for (const auto& name : corpus_names()) {
        INFO(name);
        const varic::Problem p = varic::parse(read_file(fs::path(VARIC_CORPUS_DIR) / name));
        const Result r = invoke({varic::to_string(p.task.kind), name, "--format", "json"});
        const fs::path golden = dir / (fs::path(name).stem().string() + ".json");
        if (update) {
            std::ofstream(golden, std::ios::binary) << r.out;
            continue;
        }
        REQUIRE(fs::exists(golden));
        CHECK(r.out == read_file(golden));
    }
}

TEST_CASE("options")
{
    const Result deg0 = invoke({"nonlinear", "nonlinear_point.vp", "--degree", "0"});
    CHECK(deg0.code == 1);

    const Result onsol = invoke({"check", "damped_check.vp", "--on-solutions", "--format", "json"});
    CHECK(onsol.code == 1);
    CHECK(json_of(onsol)["verdict"]["on_solutions"] == true);

    const Result low = invoke({"lagrangian", "wave.vp", "--max-order", "1"});
    CHECK(low.code == 65);
    CHECK(low.err.find("order overflow") != std::string::npos);

    // Moving the center changes H(E) but not its Euler-Lagrange class.
    const fs::path center = fs::temp_directory_path() / "varic_center_test.vp";
    std::ofstream(center) << "center u = t + 1;\n";
    const auto moved = json_of(invoke({"lagrangian", "sho.vp", "--format", "json", "--center", center.string()}));
    const auto origin = json_of(invoke({"lagrangian", "sho.vp", "--format", "json"}));
    CHECK(moved["problem"]["center"][0]["ascii"] == "t + 1");
    CHECK(moved["lagrangian"]["raw"] != origin["lagrangian"]["raw"]);
    CHECK(moved["corroboration"]["ok"] == true);

    std::ofstream(center) << "center u = u_t;\n";
    const Result bad_center = invoke({"lagrangian", "sho.vp", "--center", center.string()});
    CHECK(bad_center.code == 65);
    CHECK(bad_center.err.find(center.string() + ":1:") == 0);
    fs::remove(center);
}

TEST_CASE("usage and parse errors")
{
    CHECK(invoke({}).code == 64);
    CHECK(invoke({"solve", "sho.vp"}).code == 64);
    CHECK(invoke({"check"}).code == 64);
    CHECK(invoke({"check", "sho.vp", "--format", "xml"}).code == 64);
    CHECK(invoke({"check", "sho.vp", "--max-order", "13"}).code == 64);
    CHECK(invoke({"check", "sho.vp", "--bogus"}).code == 64);
    CHECK(invoke({"check", "does_not_exist.vp"}).code == 64);
    CHECK(invoke({"multiplier", "sho.vp"}).code == 64);

    const Result help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("--on-solutions") != std::string::npos);

    const fs::path bad = fs::temp_directory_path() / "varic_bad_test.vp";
    std::ofstream(bad) << "base t;\nfield u(t);\neq E: u_tt + v;\ntask check;\n";
    const Result r = invoke({"check", bad.string()});
    CHECK(r.code == 65);
    CHECK(r.out.empty());
    CHECK(r.err == bad.string() + ":3:14: unknown identifier 'v'\n");
    fs::remove(bad);
}
