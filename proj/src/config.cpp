#include "geoclt/config.hpp"

#include "geoclt/hull.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace geoclt {

std::string model_name(ModelKind m)
{
    switch (m) {
    case ModelKind::RiemannianVolume:
        return "riemannian_volume";
    case ModelKind::FinslerVolume:
        return "finsler_volume";
    case ModelKind::DualVolume:
        return "dual_volume";
    case ModelKind::MeanWidth:
        return "mean_width";
    }
    return "?";
}

ModelKind parse_model(const std::string& s)
{
    if (s == "riemannian_volume")
        return ModelKind::RiemannianVolume;
    if (s == "finsler_volume")
        return ModelKind::FinslerVolume;
    if (s == "dual_volume")
        return ModelKind::DualVolume;
    if (s == "mean_width")
        return ModelKind::MeanWidth;
    throw ConfigError("unknown model '" + s + "'");
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

nlohmann::json node_to_json(const toml::node& node)
{
    if (const auto* t = node.as_table()) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : *t)
            j[std::string(k.str())] = node_to_json(v);
        return j;
    }
    if (const auto* a = node.as_array()) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& v : *a)
            j.push_back(node_to_json(v));
        return j;
    }
    if (const auto* v = node.as_integer())
        return v->get();
    if (const auto* v = node.as_floating_point())
        return v->get();
    if (const auto* v = node.as_boolean())
        return v->get();
    if (const auto* v = node.as_string())
        return v->get();
    throw ConfigError("unsupported TOML value (dates and times are not accepted)");
}

Vec vec_of(const nlohmann::json& j)
{
    auto v = j.get<std::vector<double>>();
    return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

DiagnoseConfig diagnose_from_json(const nlohmann::json& j)
{
    DiagnoseConfig d;
    d.kind = j.value("kind", d.kind);
    static const std::set<std::string> kinds{"visibility", "overlap", "containment", "difference", "surface_body",
                                             "cap"};
    if (!kinds.count(d.kind))
        throw ConfigError("diagnose: unknown kind '" + d.kind + "'");
    d.t_list = j.value("t_list", d.t_list);
    d.n_list = j.value("n_list", d.n_list);
    d.c = j.value("c", d.c);
    d.reps = j.value("reps", d.reps);
    d.mc_budget = j.value("mc_budget", d.mc_budget);
    d.z_count = j.value("z_count", d.z_count);
    d.grid = j.value("grid", d.grid);
    if (d.reps < 1 || d.mc_budget < 1 || d.z_count < 1 || d.grid < 0 || !(d.c > 0.0))
        throw ConfigError("diagnose: reps, mc_budget, z_count and c must be positive");
    for (double t : d.t_list)
        if (!(t > 0.0 && t < 0.5))
            throw ConfigError("diagnose: t values must lie in (0, 1/2)");
    return d;
}

nlohmann::json diagnose_to_json(const DiagnoseConfig& d)
{
    return {{"kind", d.kind}, {"t_list", d.t_list},       {"n_list", d.n_list},   {"c", d.c},
            {"reps", d.reps}, {"mc_budget", d.mc_budget}, {"z_count", d.z_count}, {"grid", d.grid}};
}

} // namespace

nlohmann::json toml_to_json(const std::string& text, const std::string& source)
{
    try {
        const toml::table tbl = toml::parse(text, source);
        return node_to_json(tbl);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "TOML parse error in " << source << " at line " << e.source().begin.line << ": " << e.description();
        throw ConfigError(os.str());
    }
}

Polytope polytope_from_spec(const nlohmann::json& spec, int dim)
{
    const std::string kind = spec.value("kind", std::string());
    if (kind == "cross_polytope")
        return cross_polytope(dim, spec.at("radius").get<double>());
    if (kind == "box") {
        if (spec.contains("half_width")) {
            const double a = spec.at("half_width").get<double>();
            return box_polytope(Vec::Constant(dim, -a), Vec::Constant(dim, a));
        }
        return box_polytope(vec_of(spec.at("lo")), vec_of(spec.at("hi")));
    }
    if (kind == "vertices") {
        std::vector<Vec> pts;
        for (const auto& p : spec.at("points"))
            pts.push_back(vec_of(p));
        return convex_hull(pts, dim);
    }
    throw ConfigError("unknown polytope kind '" + kind + "'");
}

Polytope inner_polytope(const ExperimentConfig& cfg, const SupportBody& K)
{
    if (cfg.T)
        return polytope_from_spec(*cfg.T, K.dim());
    return cross_polytope(K.dim(), 0.25 * K.inradius());
}

Polytope window_polytope(const ExperimentConfig& cfg, const SupportBody& K)
{
    if (cfg.L)
        return polytope_from_spec(*cfg.L, K.dim());
    auto [lo, hi] = K.bounding_box();
    return box_polytope(lo.array() - 1.0, hi.array() + 1.0);
}

void ExperimentConfig::validate() const
{
    try {
        const SupportBody K = SupportBody::from_json(body);
        const int d = K.dim();
        quadrature.validate();
        if (n_list.empty())
            throw ConfigError("n list is empty");
        for (int n : n_list)
            if (n < d + 1)
                throw ConfigError("every n must be at least d + 1 = " + std::to_string(d + 1));
        if (reps < 2)
            throw ConfigError("reps must be at least 2");
        if (threads < 0)
            throw ConfigError("threads must be nonnegative");
        const bool riemannian = geometry.geometry == "euclidean" || geometry.geometry == "klein" ||
                                geometry.geometry == "gnomonic";
        if (model == ModelKind::RiemannianVolume && !riemannian)
            throw ConfigError("riemannian_volume needs a euclidean, klein or gnomonic geometry");
        if (model == ModelKind::FinslerVolume && riemannian)
            throw ConfigError("finsler_volume needs a hilbert or funk geometry");
        if (riemannian)
            (void)make_weights(geometry, K);
        if (geometry.omega) {
            const SupportBody omega = SupportBody::from_json(*geometry.omega);
            if (omega.dim() != d)
                throw ConfigError("omega and K have different dimensions");
            for (const Vec& u : SupportBody::check_directions(d, d == 2 ? 720 : 2000))
                if (!(K.h(u) < omega.h(u)))
                    throw ConfigError("K must lie in the interior of omega");
        }
        if (model == ModelKind::DualVolume) {
            if (!(j != 0.0) || !std::isfinite(j))
                throw ConfigError("dual_volume needs a finite nonzero j");
            const Polytope T = inner_polytope(*this, K);
            if (!T.contains_origin())
                throw ConfigError("T must contain the origin in its interior");
            for (const Vec& v : T.vertices())
                if (!K.contains(v, -1e-9))
                    throw ConfigError("T must lie in the interior of K");
        }
        if (model == ModelKind::MeanWidth) {
            const Polytope L = window_polytope(*this, K);
            for (const Facet& f : L.facets())
                if (!(K.h(f.normal) < f.offset * (1.0 - 1e-9)))
                    throw ConfigError("K must lie in the interior of the window L");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json out{{"name", name},
                       {"model", model_name(model)},
                       {"body", body},
                       {"geometry", geometry.to_json()},
                       {"quadrature", quadrature.to_json()},
                       {"n", n_list},
                       {"reps", reps},
                       {"master_seed", master_seed},
                       {"check_dual", check_dual}};
    if (model == ModelKind::DualVolume)
        out["j"] = j;
    if (T)
        out["T"] = *T;
    if (L)
        out["L"] = *L;
    if (diagnose)
        out["diagnose"] = diagnose_to_json(*diagnose);
    return out;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& in)
{
    try {
        static const std::set<std::string> keys{"name", "model", "j",  "body",    "geometry",    "quadrature",
                                                "T",    "L",     "n",  "reps",    "master_seed", "threads",
                                                "check_dual",    "diagnose"};
        for (const auto& [k, v] : in.items())
            if (!keys.count(k))
                throw ConfigError("unknown config key '" + k + "'");
        ExperimentConfig c;
        c.name = in.value("name", c.name);
        c.model = parse_model(in.at("model").get<std::string>());
        c.j = in.value("j", 0.0);
        c.body = in.at("body");
        c.geometry = GeometrySpec::from_json(in.value("geometry", nlohmann::json::object()));
        c.quadrature = QuadratureSpec::from_json(in.value("quadrature", nlohmann::json::object()));
        if (in.contains("T"))
            c.T = in.at("T");
        if (in.contains("L"))
            c.L = in.at("L");
        if (in.at("n").is_number_integer())
            c.n_list = {in.at("n").get<int>()};
        else
            c.n_list = in.at("n").get<std::vector<int>>();
        c.reps = in.at("reps").get<int>();
        if (!in.contains("master_seed"))
            throw ConfigError("master_seed is required");
        const auto& seed = in.at("master_seed");
        if (seed.is_number_integer() && seed.get<long long>() < 0)
            throw ConfigError("master_seed must be nonnegative");
        c.master_seed = seed.get<std::uint64_t>();
        c.threads = in.value("threads", 0);
        c.check_dual = in.value("check_dual", false);
        if (in.contains("diagnose"))
            c.diagnose = diagnose_from_json(in.at("diagnose"));
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_json().dump()); }

ExperimentConfig parse_config(const std::string& toml_text)
{
    ExperimentConfig c = ExperimentConfig::from_json(toml_to_json(toml_text));
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig c = ExperimentConfig::from_json(toml_to_json(ss.str(), path.string()));
    c.validate();
    return c;
}

} // namespace geoclt
