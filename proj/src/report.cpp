#include "geoclt/report.hpp"

#include "geoclt/svg.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace geoclt {

namespace fs = std::filesystem;

namespace {

std::string g17(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s)
{
    if (s == "nan")
        return NAN;
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
        throw DataError("bad number '" + s + "'");
    return v;
}

} // namespace

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw DataError("write failed for " + path.string());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string records_csv(const std::vector<ReplicationRecord>& records)
{
    std::string out = "n,replication,seed_path,value,aux\n";
    for (const ReplicationRecord& r : records)
        out += std::to_string(r.n) + ',' + std::to_string(r.replication) + ',' + r.seed_path + ',' + g17(r.value) +
               ',' + g17(r.aux) + '\n';
    return out;
}

std::vector<ReplicationRecord> parse_records_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "n,replication,seed_path,value,aux")
        throw DataError("records.csv: unexpected header");
    std::vector<ReplicationRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        if (f.size() != 5)
            throw DataError("records.csv line " + std::to_string(lineno) + ": expected 5 fields");
        try {
            ReplicationRecord r;
            r.n = std::stoi(f[0]);
            r.replication = std::stoi(f[1]);
            r.seed_path = f[2];
            r.value = parse_double(f[3]);
            r.aux = parse_double(f[4]);
            // A retried replication carries a third path component.
            r.attempts = std::count(f[2].begin(), f[2].end(), '/') >= 2 ? 2 : 1;
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw DataError("records.csv line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

void emit_report(const CLTReport& report, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw DataError("cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / "records.csv", records_csv(report.records));

    std::string timings = "n,replication,wall_time,attempts\n";
    for (const ReplicationRecord& r : report.records)
        timings += std::to_string(r.n) + ',' + std::to_string(r.replication) + ',' + g17(r.wall_time) + ',' +
                   std::to_string(r.attempts) + '\n';
    write_text(dir / "timings.csv", timings);
    write_text(dir / "report.json", report.to_json().dump(2) + "\n");

    std::vector<double> ns;
    std::vector<double> vars;
    std::vector<double> kols;
    for (const NSummary& s : report.per_n) {
        const std::string tag = std::to_string(s.n);
        write_text(dir / ("hist_n" + tag + ".svg"),
                   svg::normal_histogram(s.standardized, "standardized values, n = " + tag));
        write_text(dir / ("qq_n" + tag + ".svg"), svg::normal_qq(s.standardized, "normal QQ plot, n = " + tag));
        ns.push_back(s.n);
        vars.push_back(s.variance);
        kols.push_back(s.kolmogorov);
    }

    svg::Series vpts{ns, vars, "#1f77b4", true, "sample variance"};
    std::vector<svg::Series> vseries{vpts};
    if (report.variance_fit) {
        svg::Series line{{}, {}, "#d62728", false, "fit, slope " + std::to_string(report.variance_fit->slope)};
        for (double n : ns) {
            line.x.push_back(n);
            line.y.push_back(std::exp(report.variance_fit->intercept + report.variance_fit->slope * std::log(n)));
        }
        vseries.push_back(line);
    }
    write_text(dir / "variance.svg",
               svg::plot({"variance against n", "n", "variance", true, true}, vseries));

    svg::Series kpts{ns, kols, "#1f77b4", true, "Kolmogorov distance"};
    std::vector<svg::Series> kseries{kpts};
    if (report.rate_fit) {
        svg::Series line{{}, {}, "#d62728", false, "fit, exponent " + std::to_string(report.rate_fit->exponent)};
        for (double n : ns) {
            line.x.push_back(n);
            line.y.push_back(std::exp(report.rate_fit->intercept + report.rate_fit->exponent * std::log(n)));
        }
        kseries.push_back(line);
    }
    write_text(dir / "kolmogorov.svg",
               svg::plot({"Kolmogorov distance to N(0,1)", "n", "d_Kol", true, true}, kseries));
}

CLTReport load_report(const fs::path& dir)
{
    CLTReport r;
    try {
        r = CLTReport::from_json(nlohmann::json::parse(read_text(dir / "report.json")));
    } catch (const nlohmann::json::exception& e) {
        throw DataError((dir / "report.json").string() + ": " + e.what());
    }
    r.records = parse_records_csv(read_text(dir / "records.csv"));
    return r;
}

CLTReport rebuild_report(const fs::path& dir)
{
    const CLTReport old = load_report(dir);
    CLTReport fresh = summarize(old.config, old.config_hash, old.master_seed, old.dim, old.records);
    // timings.csv is kept as written by the run.
    const fs::path timings = dir / "timings.csv";
    const std::string keep = fs::exists(timings) ? read_text(timings) : std::string();
    emit_report(fresh, dir);
    if (!keep.empty())
        write_text(timings, keep);
    return fresh;
}

} // namespace geoclt
