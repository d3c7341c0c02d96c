#include "geoclt/experiments.hpp"
#include "geoclt/hull.hpp"
#include "geoclt/measure.hpp"
#include "geoclt/report.hpp"
#include "geoclt/svg.hpp"

#include <doctest.h>

#include <filesystem>

using namespace geoclt;

namespace {

const char* kDisc = R"(
name = "disc"
model = "riemannian_volume"
n = [30, 60]
reps = 40
master_seed = 17

[body]
kind = "ball"
dim = 2
)";

} // namespace

TEST_CASE("Kolmogorov distance")
{
    CHECK(kolmogorov_distance({0.0, 0.0, 0.0}) >= 0.5);
    const int m = 1000;
    std::vector<double> q;
    for (int i = 1; i <= m; ++i)
        q.push_back(normal_quantile((i - 0.5) / m));
    CHECK(kolmogorov_distance(q) == doctest::Approx(0.5 / m).epsilon(1e-9));
    SeedStream s(1);
    std::vector<double> z;
    for (int i = 0; i < 10000; ++i)
        z.push_back(s.normal());
    CHECK(kolmogorov_distance(z) < 0.025);
    CHECK_THROWS_AS(kolmogorov_distance({}), DataError);
}

TEST_CASE("standardization")
{
    SeedStream s(2);
    std::vector<double> v;
    for (int i = 0; i < 500; ++i)
        v.push_back(3.14159 + 1e-7 * s.exponential());
    const auto z = standardize(v);
    const MeanVar mv = mean_variance(z);
    CHECK(std::abs(mv.mean) < 1e-12);
    CHECK(std::abs(mv.variance - 1.0) < 1e-12);
}

TEST_CASE("scaling fits")
{
    std::vector<std::pair<double, double>> rows;
    for (double n : {50.0, 100.0, 200.0, 400.0, 800.0})
        rows.emplace_back(n, std::pow(n, -5.0));
    const LinearFit f = variance_scaling_fit(rows);
    CHECK(f.slope == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> k;
    for (double n : {50.0, 100.0, 200.0, 400.0, 800.0})
        k.emplace_back(n, 1.0 / std::sqrt(n));
    const RateFit r = rate_curve(k, 2);
    CHECK(r.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.exponent_adjusted == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(r.envelope_power == doctest::Approx(7.0));
    CHECK(r.below_envelope);

    CHECK_THROWS_AS(variance_scaling_fit({{10, 1}, {20, 1}, {40, 1}}), DataError);
    CHECK_THROWS_AS(variance_scaling_fit({{10, 1}, {20, 1}, {40, 1}, {80, 1}}), DataError);
    CHECK_THROWS_AS(variance_scaling_fit({{10, 1}, {20, 1}, {40, 0}, {800, 1}}), DataError);
}

TEST_CASE("config parsing and validation")
{
    const ExperimentConfig c = parse_config(kDisc);
    CHECK(c.n_list == std::vector<int>{30, 60});
    CHECK(c.geometry.geometry == "euclidean");
    CHECK(c.hash() == parse_config(kDisc).hash());
    CHECK(c.hash().size() == 16);
    CHECK(ExperimentConfig::from_json(c.to_json()).to_json() == c.to_json());

    CHECK_THROWS_AS(parse_config("model = \"riemannian_volume\"\n["), ConfigError);
    CHECK_THROWS_AS(parse_config("model = \"volume\"\nn = [10]\nreps = 3\nmaster_seed = 1\n[body]\nkind = \"ball\"\n"
                                 "dim = 2\n"),
                    ConfigError);
    const std::string base = "n = [10]\nreps = 3\nmaster_seed = 1\n[body]\nkind = \"ball\"\ndim = 2\n";
    // n below d + 1.
    CHECK_THROWS_AS(parse_config("model = \"riemannian_volume\"\nn = [2]\nreps = 3\nmaster_seed = 1\n[body]\n"
                                 "kind = \"ball\"\ndim = 2\n"),
                    ConfigError);
    // Missing seed.
    CHECK_THROWS_AS(parse_config("model = \"riemannian_volume\"\nn = [10]\nreps = 3\n[body]\nkind = \"ball\"\n"
                                 "dim = 2\n"),
                    ConfigError);
    // Finsler model with a Riemannian geometry.
    CHECK_THROWS_AS(parse_config("model = \"finsler_volume\"\n" + base), ConfigError);
    // Dual volume without j, and with T sticking out of K.
    CHECK_THROWS_AS(parse_config("model = \"dual_volume\"\n" + base), ConfigError);
    CHECK_THROWS_AS(parse_config("model = \"dual_volume\"\nj = 1.0\n" + base +
                                 "[T]\nkind = \"cross_polytope\"\nradius = 1.5\n"),
                    ConfigError);
    // Window not containing K.
    CHECK_THROWS_AS(parse_config("model = \"mean_width\"\n" + base + "[L]\nkind = \"box\"\nhalf_width = 0.9\n"),
                    ConfigError);
    // Klein needs K inside the unit ball.
    CHECK_THROWS_AS(parse_config("model = \"riemannian_volume\"\n" + base + "[geometry]\ngeometry = \"klein\"\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("model = \"riemannian_volume\"\nbogus = 1\n" + base), ConfigError);
    // Defaults for T and L.
    const ExperimentConfig mw = parse_config("model = \"mean_width\"\n" + base);
    const SupportBody K = SupportBody::from_json(mw.body);
    const Polytope L = window_polytope(mw, K);
    CHECK(support_function(L, unit(2, 0)) == doctest::Approx(2.0));
    const ExperimentConfig dv = parse_config("model = \"dual_volume\"\nj = -1\n" + base);
    CHECK(support_function(inner_polytope(dv, K), unit(2, 1)) == doctest::Approx(0.25));
}

TEST_CASE("experiment run: records, standardization, determinism")
{
    ExperimentConfig c = parse_config(kDisc);
    c.threads = 1;
    const CLTReport a = run_experiment(c);
    CHECK(a.records.size() == 80);
    CHECK(a.per_n.size() == 2);
    for (const NSummary& s : a.per_n) {
        const MeanVar mv = mean_variance(s.standardized);
        CHECK(std::abs(mv.mean) < 1e-12);
        CHECK(std::abs(mv.variance - 1.0) < 1e-12);
        CHECK(s.mean < std::numbers::pi);
    }
    c.threads = 3;
    const CLTReport b = run_experiment(c);
    CHECK(records_csv(a.records) == records_csv(b.records));
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.records[0].seed_path == "0/0");
    CHECK(a.records[41].seed_path == "1/1");
}

TEST_CASE("report emission round trip")
{
    const CLTReport r = run_experiment(parse_config(kDisc));
    const auto dir = std::filesystem::temp_directory_path() / "geoclt_unit_report";
    std::filesystem::remove_all(dir);
    emit_report(r, dir);
    for (const char* f : {"records.csv", "timings.csv", "report.json", "variance.svg", "kolmogorov.svg",
                          "hist_n30.svg", "qq_n60.svg"})
        CHECK(std::filesystem::exists(dir / f));
    const CLTReport back = load_report(dir);
    CHECK(back.to_json() == r.to_json());
    CHECK(records_csv(back.records) == records_csv(r.records));
    const std::string csv = read_text(dir / "records.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 81);
    const CLTReport rebuilt = rebuild_report(dir);
    CHECK(rebuilt.to_json() == r.to_json());
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_report(dir), DataError);
    CHECK_THROWS_AS(parse_records_csv("a,b\n"), DataError);
}

TEST_CASE("dual volume of order d reproduces the volume model")
{
    const std::string body = "n = [40]\nreps = 10\nmaster_seed = 4\n[body]\nkind = \"ellipsoid\"\n"
                             "semi_axes = [1.0, 0.7]\n";
    const CLTReport vol = run_experiment(parse_config("model = \"riemannian_volume\"\n" + body));
    const CLTReport dual = run_experiment(parse_config("model = \"dual_volume\"\nj = 2\n" + body));
    for (std::size_t i = 0; i < vol.records.size(); ++i) {
        CHECK(dual.records[i].aux == 0.0);
        CHECK(std::abs(dual.records[i].value - vol.records[i].value) < 1e-8 * vol.records[i].value);
    }
}

TEST_CASE("mean width: direct and dual routes per replication")
{
    const CLTReport r = run_experiment(parse_config(
        "model = \"mean_width\"\ncheck_dual = true\nn = [10, 40]\nreps = 20\nmaster_seed = 8\n[body]\n"
        "kind = \"ellipsoid\"\nsemi_axes = [1.0, 0.6]\n"));
    for (const ReplicationRecord& rec : r.records)
        CHECK(std::abs(rec.value - rec.aux) < 1e-4);
    for (const NSummary& s : r.per_n)
        CHECK(s.dual_max_abs_diff < 1e-4);
    // Circumscribed polygons shrink towards K as n grows.
    CHECK(r.per_n[1].mean < r.per_n[0].mean);
}

TEST_CASE("T is absorbed by large hulls")
{
    const CLTReport r = run_experiment(parse_config(
        "model = \"dual_volume\"\nj = -1\nn = [4, 8, 64]\nreps = 200\nmaster_seed = 12\n[body]\nkind = \"ball\"\n"
        "dim = 2\n[T]\nkind = \"cross_polytope\"\nradius = 0.5\n"));
    CHECK(r.per_n[0].aux_mean > r.per_n[2].aux_mean);
    CHECK(r.per_n[2].aux_mean == 0.0);
}

TEST_CASE("hull functional grows along coupled samples")
{
    const ExperimentConfig c = parse_config(
        "model = \"riemannian_volume\"\nn = [10]\nreps = 2\nmaster_seed = 1\n[body]\nkind = \"ball\"\ndim = 2\n"
        "radius = 0.6\n[geometry]\ngeometry = \"klein\"\n");
    const ExperimentModel m(c);
    SeedStream s(77);
    const auto pts = m.sampler().sample(s, 400);
    double prev = 0.0;
    for (int n : {10, 50, 100, 200, 400}) {
        const std::vector<BoundaryPoint> head(pts.begin(), pts.begin() + n);
        const double v = m.evaluate(head).value;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("diagnostics runner")
{
    const ExperimentConfig c = parse_config(R"(
model = "riemannian_volume"
n = [10]
reps = 2
master_seed = 3
[body]
kind = "ball"
dim = 2
[diagnose]
kind = "cap"
t_list = [0.01, 0.1]
grid = 360
)");
    const auto rows = run_diagnostic(c);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].estimate == doctest::Approx(0.01).epsilon(1e-8));
    CHECK(rows[0].estimate == doctest::Approx(std::cos(std::numbers::pi * 0.01)).epsilon(1e-8));
    const std::string csv = diagnostics_csv(rows, c.hash());
    CHECK(csv.rfind("param,quantity,estimate,stderr,samples,config_hash\n", 0) == 0);
    CHECK_THROWS_AS(run_diagnostic(parse_config(kDisc)), ConfigError);
}

TEST_CASE("svg output is well formed")
{
    const std::string s = svg::normal_histogram({-1.0, 0.0, 0.5, 1.0}, "a < b & c");
    CHECK(s.find("<svg") == 0);
    CHECK(s.find("a &lt; b &amp; c") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(svg::normal_qq({0.1, -0.3}, "qq").find("<circle") != std::string::npos);
}
