#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CONGLAB_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

fs::path temp_file(const std::string& name) { return fs::temp_directory_path() / name; }

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("gen --form nonsense --prec 10 --out /tmp/x.json").exit_code == 2);
}

TEST_CASE("gen, scan and validate round trip") {
    auto series = temp_file("cli_delta7.json");
    auto certs = temp_file("cli_delta7_certs.json");
    auto r = run_cli("gen --form delta --prec 30001 --mod 7 --out " + series.string());
    CHECK(r.exit_code == 0);

    r = run_cli("scan --in " + series.string() + " --ell 7 --max-modulus 130 --bound 30000 --support 25 --out " +
                certs.string());
    CHECK(r.exit_code == 0);

    r = run_cli("validate --certs " + certs.string() + " --in " + series.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0 discrepancies") != std::string::npos);

    // corrupt one certificate: claim a congruence on 2Z that fails
    {
        std::ifstream is(certs);
        std::stringstream buf;
        buf << is.rdbuf();
        std::string all = buf.str();
        std::ofstream os(certs, std::ios::trunc);
        os << all;
        os << R"({"form":{"recipe":"delta","twice_weight":24,"level":1,"character":{"kronecker":1,"modulus":1}},"ell":7,"claim":{"kind":"progression","modulus":2,"residue":0},"evidence":{"kind":"verified_to_bound","bound":1000,"support":100},"witnesses":[]})"
           << "\n";
    }
    r = run_cli("validate --certs " + certs.string() + " --in " + series.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("1 discrepancies") != std::string::npos);

    fs::remove(series);
    fs::remove(certs);
}

TEST_CASE("certify-table reproduces the published cells") {
    auto r = run_cli("certify-table --ell 7 --primes 2 --count 2 --verify-bound 2000");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("2^6, 2^13") != std::string::npos);

    auto rec = run_cli("certify-table --ell 11 --primes 3,11 --count 2 --verify-bound 2000 --format records");
    CHECK(rec.exit_code == 0);
    CHECK(rec.output.find("\"exponents\":[10,21]") != std::string::npos);
    CHECK(rec.output.find("\"full_progression\":false") != std::string::npos);
}

TEST_CASE("certify accepts table entries and refuses others") {
    CHECK(run_cli("certify --form delta --ell 7 --p 2 --m 6").exit_code == 0);
    auto refused = run_cli("certify --form delta --ell 7 --p 2 --m 5");
    CHECK(refused.exit_code == 1);
    CHECK(refused.output.find("\"certified\":false") != std::string::npos);
}

TEST_CASE("rep commands") {
    auto r = run_cli("rep dims --modulus 5 --ell 3 --beta 1 --format records");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"dimension\":5") != std::string::npos);
    r = run_cli("rep dims --modulus 5 --ell 3 --beta 0 --format records");
    CHECK(r.output.find("\"dimension\":6") != std::string::npos);
    r = run_cli("rep steinberg --modulus 5 --ell 3 --format records");
    CHECK(r.output.find("\"contains_invariant\":true") != std::string::npos);
    r = run_cli("rep steinberg --modulus 5 --ell 7 --format records");
    CHECK(r.output.find("\"contains_invariant\":false") != std::string::npos);
}

TEST_CASE("partition checks") {
    auto r = run_cli("partition --check ramanujan --bound 2000");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("pass") != std::string::npos);
    CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical output") {
    const std::string cmd = "certify-table --ell 3,5 --primes 2,3 --count 2 --verify-bound 2000 --format records";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    auto s1 = temp_file("cli_det1.json"), s2 = temp_file("cli_det2.json");
    run_cli("gen --form eta^-1 --prec 2000 --mod 5 --out " + s1.string());
    run_cli("gen --form eta^-1 --prec 2000 --mod 5 --out " + s2.string());
    std::ifstream f1(s1), f2(s2);
    std::stringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    CHECK(b1.str() == b2.str());
    fs::remove(s1);
    fs::remove(s2);
}

TEST_CASE("the series cache directory is honored") {
    auto dir = temp_file("cli_cache_dir");
    fs::remove_all(dir);
    auto out = temp_file("cli_cache_out.json");
    const std::string env = "CONGRUENCE_LAB_CACHE=" + dir.string() + " ";
    const std::string cmd = env + std::string(CONGLAB_CLI_PATH) + " gen --form delta --prec 100 --mod 7 --out " +
                            out.string() + " 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    bool cached = false;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        cached = true;
    }
    CHECK(cached);
    CHECK(std::system(cmd.c_str()) == 0); // second run reads the cache
    fs::remove_all(dir);
    fs::remove(out);
}

TEST_CASE("precision errors exit with code 3") {
    auto series = temp_file("cli_small.json");
    run_cli("gen --form delta --prec 50 --mod 7 --out " + series.string());
    auto r = run_cli("scan --in " + series.string() + " --ell 7 --max-modulus 10 --bound 10000 --support 5");
    CHECK(r.exit_code == 3);
    fs::remove(series);
}
