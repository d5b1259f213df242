#include "ppw/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ppw;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s)
{
    int n = 0;
    for (char c : s)
        n += c == '\n';
    return n;
}

std::string temp_path(const std::string& name)
{
    return std::string(PPW_TEST_DATA_DIR) + "/" + name;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("constant prints the bare number")
    {
        const Result r = run({"constant", "--dim", "2"});
        CHECK(r.code == exit_ok);
        CHECK(std::stod(r.out) == doctest::Approx(2.5387339670887545).epsilon(1e-14));
    }

    TEST_CASE("constant with --out json carries the manifest")
    {
        const Result r = run({"constant", "--dim", "3", "--out", "json"});
        REQUIRE(r.code == exit_ok);
        const json j = json::parse(r.out);
        CHECK(j.at("manifest").at("version") == version);
        CHECK(j.at("manifest").contains("wall_time_s"));
        CHECK(j.at("manifest").at("command_line").get<std::string>().find("constant") != std::string::npos);
    }

    TEST_CASE("number formatting round-trips")
    {
        for (double v : {0.1, 2.5387339670887545, 1e-300, -3.0})
            CHECK(std::stod(format_number(v)) == v);
    }

    TEST_CASE("scan emits a header and one CSV row per radius")
    {
        const Result r = run({"scan", "--dim", "2", "--potential", "power:k=1,alpha=2", "--rmin", "0.5", "--rmax",
                              "6", "--steps", "12"});
        CHECK(r.code == exit_ok);
        CHECK(count_lines(r.out) == 13);
        CHECK(r.out.rfind("R,lambda1,lambda2,ratio,eqlambda_margin", 0) == 0);
        CHECK(json::parse(r.err).at("checks").at("ratio_nonincreasing") == true);
    }

    TEST_CASE("json output is deterministic apart from the wall time")
    {
        const std::vector<std::string> args{"solve-ball", "--dim", "3", "--radius", "1.224744871391589", "--potential",
                                            "power:k=1,alpha=2", "--out", "json"};
        json a = json::parse(run(args).out), b = json::parse(run(args).out);
        a["manifest"].erase("wall_time_s");
        b["manifest"].erase("wall_time_s");
        CHECK(a == b);
        CHECK(a.at("lambda").get<double>() == doctest::Approx(7.0).epsilon(1e-9));
    }

    TEST_CASE("usage errors exit 1 with a message")
    {
        CHECK(run({"no-such-command"}).code == exit_error);
        CHECK(run({"constant", "--dim", "1"}).code == exit_error);
        const Result r = run({"scan", "--potential", "nonsense"});
        CHECK(r.code == exit_error);
        CHECK_FALSE(r.err.empty());
    }

    TEST_CASE("failing check exits 2")
    {
        const std::string path = temp_path("two_blobs.mask");
        {
            std::ofstream f(path);
            f << "7 3 0.1 0.35 0.15\n0000000\n0110110\n0000000\n";
        }
        const Result r = run({"solve-domain", "--mask", path, "--k", "1"});
        CHECK(r.code == exit_check_failed);
        CHECK(json::parse(r.out).at("manifest").at("checks").at("connected") == false);
    }

    TEST_CASE("tolerance falls back to PPW_DEFAULT_TOL")
    {
        setenv("PPW_DEFAULT_TOL", "1e-6", 1);
        const Result r = run({"solve-ball", "--dim", "2", "--out", "json"});
        unsetenv("PPW_DEFAULT_TOL");
        REQUIRE(r.code == exit_ok);
        CHECK(json::parse(r.out).at("manifest").at("tolerances").at("eigen").get<double>() == 1e-6);
        const Result d = run({"solve-ball", "--dim", "2", "--out", "json"});
        CHECK(json::parse(d.out).at("manifest").at("tolerances").at("eigen").get<double>() == 1e-10);
    }

    TEST_CASE("--out path writes the file and a CSV manifest sidecar")
    {
        const std::string path = temp_path("cli_scan.csv");
        const Result r = run({"scan", "--steps", "3", "--rmax", "2", "--out", path});
        REQUIRE(r.code == exit_ok);
        std::ifstream f(path);
        std::stringstream body;
        body << f.rdbuf();
        CHECK(count_lines(body.str()) == 4);
        std::ifstream m(path + ".manifest.json");
        REQUIRE(m.good());
        CHECK(json::parse(m).at("version") == version);
    }

    TEST_CASE("verify on a disk shape reports the bound")
    {
        const Result r = run({"verify", "--shape", "disk:r=1", "--step", "0.0625", "--potential",
                              "power:k=1,alpha=2", "--comparison", "power:k=1,alpha=2", "--no-gap"});
        CHECK(r.code == exit_ok);
        const json j = json::parse(r.out);
        CHECK(j.at("manifest").at("checks").at("second_eigenvalue_bound") == true);
    }

    TEST_CASE("comparison potential violating (b) is rejected by name")
    {
        const std::string path = temp_path("kinked.table");
        {
            std::ofstream f(path);
            for (int i = 0; i <= 200; ++i) {
                const double r = 0.01 * i;
                // quadratic, then linear: V'' drops from 2 to 0 at r = 0.5
                f << r << ' ' << (r <= 0.5 ? r * r : r - 0.25) << '\n';
            }
        }
        const Result r = run({"verify", "--shape", "square:side=1", "--step", "0.125", "--comparison",
                              "table:" + path});
        CHECK(r.code == exit_error);
        CHECK(r.err.find("(b)") != std::string::npos);
    }

    TEST_CASE("diagnostics, rearrange, gaussian and lemma3 succeed on defaults")
    {
        CHECK(run({"diagnostics", "--dim", "2", "--y", "0.5", "--y", "2"}).code == exit_ok);
        CHECK(run({"rearrange", "--shape", "ellipse:a=1,b=0.5", "--step", "0.0625"}).code == exit_ok);
        CHECK(run({"gaussian", "--sign", "minus", "--radius", "2"}).code == exit_ok);
        CHECK(run({"lemma3", "--samples", "1000", "--seed", "7"}).code == exit_ok);
    }
}
