#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "oracle_helpers.hpp"
#include "spacesamp/json_io.hpp"

using nlohmann::json;
using namespace spacesamp;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string base = "/tmp/spacesamp_cli_test_" + std::to_string(++counter);
    const std::string cmd =
        std::string(SPACESAMP_CLI_PATH) + " " + args + " >" + base + ".out 2>" + base + ".err";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(base + ".out");
    r.err = slurp(base + ".err");
    std::remove((base + ".out").c_str());
    std::remove((base + ".err").c_str());
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("design and distribution JSON round-trips", "[cli]") {
    const std::vector<Design> designs = {
        Design::renewal(30, nb_jump_for_rate(2.0, 0.2)),
        Design::renewal(30, DiscreteDist::bernoulli(0.4)),
        Design::equilibrium_renewal(50, poisson_jump_for_rate(0.1)),
        Design::equilibrium_renewal(50, systematic_jump(10)),
        Design::circular(20, 5, SpacingFamily::mnh, 2.5),
        Design::circular(20, 5, SpacingFamily::mnom),
        Design::circular(20, 5, SpacingFamily::mh, 4.0),
    };
    for (const Design& d : designs) REQUIRE(design_from_json(to_json(d)) == d);

    const std::vector<DiscreteDist> dists = {
        DiscreteDist::binomial(7, 0.25),
        DiscreteDist::hypergeometric(4, 6, 10),
        DiscreteDist::neg_hypergeometric(5, 1.5, 6.0),
        DiscreteDist::uniform(9),
        DiscreteDist::forward_of(DiscreteDist::neg_binomial(2.0, 0.4)),
    };
    for (const DiscreteDist& d : dists) REQUIRE(dist_from_json(to_json(d)) == d);

    // rate-targeted jump shorthand
    CHECK(dist_from_json(json{{"family", "geometric"}, {"pi", 0.25}}) ==
          DiscreteDist::geometric(0.25));
    CHECK(dist_from_json(json{{"family", "neg_binomial"}, {"r", 2.0}, {"pi", 0.25}}) ==
          nb_jump_for_rate(2.0, 0.25));
    CHECK(design_from_json(json{{"kind", "circular"},
                                {"N", 10},
                                {"n", 2},
                                {"spacings", {{"family", "srs"}}}}) ==
          Design::circular(10, 2, SpacingFamily::mnh, 1.0));
    CHECK_THROWS_AS(dist_from_json(json{{"family", "nope"}}), domain_error);
    CHECK_THROWS_AS(design_from_json(json::array()), domain_error);
    CHECK_THROWS_AS(study_config_from_json(json{{"reps", "many"}}), domain_error);
}

TEST_CASE("sample subcommand shape and determinism", "[cli]") {
    const std::string design = "'{\"kind\":\"circular\",\"N\":8,\"n\":3,"
                               "\"spacings\":{\"family\":\"srs\"}}'";
    const CliResult a = run_cli("sample --design " + design + " --seed 5 --draws 4");
    REQUIRE(a.code == 0);
    const auto ls = lines_of(a.out);
    REQUIRE(ls.size() == 4);
    for (const std::string& line : ls) {
        const auto vals = [&] {
            std::vector<int> v;
            std::istringstream in(line);
            std::string tok;
            while (std::getline(in, tok, ',')) v.push_back(std::stoi(tok));
            return v;
        }();
        REQUIRE(vals.size() == 3);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            CHECK(vals[i] >= 1);
            CHECK(vals[i] <= 8);
            if (i > 0) CHECK(vals[i] > vals[i - 1]);
        }
    }
    const CliResult b = run_cli("sample --design " + design + " --seed 5 --draws 4");
    CHECK(b.out == a.out); // same seed, same bytes
    const CliResult c = run_cli("sample --design " + design + " --seed 6 --draws 4");
    CHECK(c.out != a.out);

    const CliResult j =
        run_cli("sample --design " + design + " --seed 5 --draws 2 --format json");
    REQUIRE(j.code == 0);
    const json arr = json::parse(j.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 2);
    CHECK(arr[0].at("units").size() == 3);
    CHECK(arr[0].at("spacings").size() == 4);
    CHECK(arr[0].at("seed").get<std::uint64_t>() == 5);
}

TEST_CASE("inclusion subcommand tables", "[cli]") {
    const CliResult pi = run_cli(
        "inclusion --design '{\"kind\":\"renewal\",\"N\":4,"
        "\"jump\":{\"family\":\"bernoulli\",\"p\":0.5}}' --what pi");
    REQUIRE(pi.code == 0);
    const auto ls = lines_of(pi.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == "k,pi");
    const std::vector<double> want = {0.5, 0.75, 0.625, 0.6875};
    for (int k = 1; k <= 4; ++k) {
        const auto comma = ls[k].find(',');
        CHECK(std::stoi(ls[k].substr(0, comma)) == k);
        CHECK(std::stod(ls[k].substr(comma + 1)) == Catch::Approx(want[k - 1]).margin(1e-12));
    }

    const CliResult joint = run_cli(
        "inclusion --design '{\"kind\":\"circular\",\"N\":10,\"n\":2,"
        "\"spacings\":{\"family\":\"srs\"}}' --what joint --max-gap 3");
    REQUIRE(joint.code == 0);
    const auto js = lines_of(joint.out);
    REQUIRE(js.size() == 4);
    CHECK(js[0] == "gap,pi_joint,delta");
    for (int g = 1; g <= 3; ++g) {
        std::istringstream in(js[g]);
        std::string gap, pj, dl;
        std::getline(in, gap, ',');
        std::getline(in, pj, ',');
        std::getline(in, dl, ',');
        CHECK(std::stoi(gap) == g);
        CHECK(std::stod(pj) == Catch::Approx(1.0 / 45.0).margin(1e-12));
        CHECK(std::stod(dl) == Catch::Approx(1.0 / 45.0 - 0.04).margin(1e-12));
    }
}

TEST_CASE("pmf subcommand", "[cli]") {
    const CliResult r =
        run_cli("pmf --dist '{\"family\":\"geometric\",\"p\":0.5}' --max 3");
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == "x,pmf");
    const std::vector<double> want = {0.5, 0.25, 0.125, 0.0625};
    for (int x = 0; x <= 3; ++x)
        CHECK(std::stod(ls[x + 1].substr(ls[x + 1].find(',') + 1)) ==
              Catch::Approx(want[x]).margin(1e-15));
}

TEST_CASE("estimate subcommand golden case", "[cli]") {
    // SRS with N=4, n=2, y=(1,2,3,4), sample {1,3}: both variance estimators
    // equal 8 by direct calculation
    const std::string pop_path = "/tmp/spacesamp_cli_pop.csv";
    {
        std::ofstream out(pop_path);
        out << "1\n2\n3\n4\n";
    }
    const std::string design = "'{\"kind\":\"circular\",\"N\":4,\"n\":2,"
                               "\"spacings\":{\"family\":\"srs\"}}'";
    const CliResult r = run_cli("estimate --design " + design + " --population " + pop_path +
                                " --units 1,3");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("point").get<double>() == Catch::Approx(8.0).margin(1e-12));
    CHECK(j.at("variance_ht").get<double>() == Catch::Approx(8.0).margin(1e-12));
    CHECK(j.at("variance_syg").get<double>() == Catch::Approx(8.0).margin(1e-12));
    CHECK(j.at("level").get<double>() == 0.95);
    const double half = testoracle::kZ95 * std::sqrt(8.0);
    CHECK(j.at("ci").at("low").get<double>() == Catch::Approx(8.0 - half).margin(1e-9));
    CHECK(j.at("ci").at("high").get<double>() == Catch::Approx(8.0 + half).margin(1e-9));

    const CliResult m = run_cli("estimate --design " + design + " --population " + pop_path +
                                " --units 1,3 --mean");
    REQUIRE(m.code == 0);
    const json jm = json::parse(m.out);
    CHECK(jm.at("point").get<double>() == Catch::Approx(2.0).margin(1e-12));
    CHECK(jm.at("variance_syg").get<double>() == Catch::Approx(0.5).margin(1e-12));

    const CliResult bad = run_cli("estimate --design " + design + " --population " + pop_path +
                                  " --units 1,9");
    CHECK(bad.code == 1);
    CHECK(json::parse(bad.err).at("error") == "domain");
    const CliResult dup = run_cli("estimate --design " + design + " --population " + pop_path +
                                  " --units 3,3");
    CHECK(dup.code == 1);
}

TEST_CASE("verify subcommand", "[cli]") {
    const CliResult c = run_cli(
        "verify --design '{\"kind\":\"circular\",\"N\":8,\"n\":3,"
        "\"spacings\":{\"family\":\"mh\",\"r\":2}}' --reps 20000 --seed 3");
    REQUIRE(c.code == 0);
    const json jc = json::parse(c.out);
    CHECK(jc.at("pass").get<bool>());
    CHECK(jc.at("checks").size() >= 5);

    const CliResult r = run_cli(
        "verify --design '{\"kind\":\"equilibrium_renewal\",\"N\":60,"
        "\"jump\":{\"family\":\"neg_binomial\",\"r\":2.0,\"pi\":0.2}}'");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).at("pass").get<bool>());

    const CliResult noseed = run_cli(
        "verify --design '{\"kind\":\"circular\",\"N\":8,\"n\":3,"
        "\"spacings\":{\"family\":\"srs\"}}' --reps 100");
    CHECK(noseed.code == 1);
}

TEST_CASE("malformed input fails cleanly", "[cli]") {
    const CliResult r = run_cli("sample --design '{\"kind\":' --seed 1");
    CHECK(r.code == 1);
    CHECK(json::parse(r.err).at("error") == "domain");
    const CliResult u = run_cli("sample --design '{\"kind\":\"upside\"}' --seed 1");
    CHECK(u.code == 1);
}

TEST_CASE("simulate subcommand", "[cli]") {
    const std::string cfg = "'{\"N\":20,\"n\":5,\"reps\":200,\"seed\":9,\"designs\":["
                            "{\"label\":\"SRS\",\"design\":{\"kind\":\"circular\",\"N\":20,\"n\":5,"
                            "\"spacings\":{\"family\":\"srs\"}}},"
                            "{\"kind\":\"circular\",\"N\":20,\"n\":5,"
                            "\"spacings\":{\"family\":\"mnom\"}}]}'";
    const std::string json_path = "/tmp/spacesamp_cli_sim.json";
    const CliResult a = run_cli("simulate --config " + cfg + " --output-json " + json_path);
    REQUIRE(a.code == 0);
    const auto ls = lines_of(a.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "design,BR,SE,REVAR,CV,coverage,reps,excluded");
    CHECK(ls[1].substr(0, 4) == "SRS,");

    const json rep = json::parse(slurp(json_path));
    CHECK(rep.at("seed").get<std::uint64_t>() == 9);
    CHECK(rep.at("designs").size() == 2);
    CHECK(rep.at("designs")[0].at("reps").get<long long>() == 200);

    const CliResult b = run_cli("simulate --config " + cfg);
    CHECK(b.out == a.out);

    const CliResult noseed =
        run_cli("simulate --config '{\"N\":20,\"n\":5,\"reps\":100,\"designs\":[]}'");
    CHECK(noseed.code == 1);
}
