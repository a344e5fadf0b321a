#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#ifndef QLIN_CLI_PATH
#error "QLIN_CLI_PATH must point at the built binary"
#endif
#ifndef QLIN_MANIFEST_FILE
#error "QLIN_MANIFEST_FILE must point at the bundled manifest"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(QLIN_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
    return path;
}

}  // namespace

TEST_CASE("selftest passes") {
    RunResult r = run("selftest --seed 5");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "selftest");
    CHECK(j["seed"] == 5);
    CHECK(j["verdict"] == "pass");
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("expansion records classes and agrees") {
    RunResult r = run("expansion --m 2 --seed 9");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["class_count"] == 2);
    CHECK(j["classes"].size() == 2);
    CHECK(j["verdict"] == "agree");

    RunResult r3 = run("expansion --m 3 --seed 9 --format csv");
    CHECK(r3.exit_code == 0);
    CHECK(r3.out.find("class_count,4") != std::string::npos);
    CHECK(r3.out.find("verdict,agree") != std::string::npos);
}

TEST_CASE("identical invocations produce identical bytes") {
    RunResult a = run("expansion --m 4 --seed 31");
    RunResult b = run("expansion --m 4 --seed 31");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    RunResult c = run("verify-triple --n 2317 --e 4");
    RunResult d = run("verify-triple --n 2317 --e 4");
    CHECK(c.out == d.out);
}

TEST_CASE("triple verification matches the known digit profile") {
    RunResult r = run("verify-triple --n 2317 --e 4");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["digits"] == nlohmann::json::array({1, 3, 0, 0, 1, 2}));
    CHECK(j["weight"] == 7);
    CHECK(j["pp"] == true);

    RunResult bad = run("verify-triple --n 2318 --e 4");
    CHECK(bad.exit_code == 1);
    nlohmann::json jb = nlohmann::json::parse(bad.out);
    CHECK(jb["pp"] == false);
}

TEST_CASE("usage errors exit with code two") {
    CHECK(run("bogus-subcommand").exit_code == 2);
    CHECK(run("verify-triple --e 4").exit_code == 2);           // missing --n
    CHECK(run("verify-triple --n 5 --e 9").exit_code == 2);     // cap exceeded
    CHECK(run("expansion --m 9").exit_code == 2);               // cap exceeded
    CHECK(run("selftest --format yaml").exit_code == 2);        // unknown format
    CHECK(run("check-prop --id P3.5 --param e=4").exit_code == 2);  // predicate fails
    CHECK(run("check-prop --param e=4").exit_code == 2);        // no id, no instance
    CHECK(run("reproduce-table --manifest /does/not/exist.csv").exit_code == 2);
}

TEST_CASE("criterion run reports every condition") {
    RunResult r = run("check-prop --id P3.4 --param a=1 --param e=4");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 2317);
    CHECK(j["verdict"] == "pass");
    const char* keys[] = {"square_commutes", "base_pp",       "fibers_match", "detA_matches",
                          "gcd_ok",          "congruence_ok", "pp_confirmed"};
    for (const char* k : keys) CHECK(j["conditions"][k] == true);
}

TEST_CASE("instance files round trip through the cli") {
    RunResult dump = run("check-prop --id P3.6 --param e=4 --dump-instance");
    REQUIRE(dump.exit_code == 0);
    std::string path = write_temp("qlin_test_instance.json", dump.out);
    RunResult check = run("check-prop --instance " + path);
    CHECK(check.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(check.out);
    CHECK(j["id"] == "P3.6");
    CHECK(j["verdict"] == "pass");
}

TEST_CASE("manifest reproduction on a small prefix") {
    RunResult r = run(std::string("reproduce-table --e-max 3 --manifest ") +
                      QLIN_MANIFEST_FILE + " --format csv");
    CHECK(r.exit_code == 0);
    // header plus the rows with extension degree at most three
    int lines = 0;
    for (char ch : r.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 12);
    CHECK(r.out.find(",0\n") == std::string::npos);  // no failing column anywhere
}

TEST_CASE("planted manifest corruption is reported") {
    std::string bad = write_temp("qlin_bad_manifest.csv",
                                 "e,n,digits,reference\n4,2318,\"1,3,0,0,1,2\",none\n");
    RunResult r = run("reproduce-table --manifest " + bad);
    CHECK(r.exit_code == 1);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["mismatches"] == 1);
    CHECK(j["rows"][0]["digits_ok"] == false);
    CHECK(j["rows"][0]["pp"] == false);
    CHECK(j["verdict"] == "mismatch");
}

TEST_CASE("an empty manifest verifies trivially") {
    std::string empty = write_temp("qlin_empty_manifest.csv", "e,n,digits,reference\n");
    RunResult r = run("reproduce-table --manifest " + empty + " --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "e,n,digits,reference,weight,digits_ok,pp,row_ok\n");
}

TEST_CASE("environment variable supplies the manifest path") {
    std::string empty = write_temp("qlin_env_manifest.csv", "e,n,digits,reference\n");
    std::string cmd = std::string("QLIN_MANIFEST=") + empty + " " + QLIN_CLI_PATH +
                      " reproduce-table --format csv 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(out == "e,n,digits,reference,weight,digits_ok,pp,row_ok\n");
}
