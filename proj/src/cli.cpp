#include "quadseq/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <thread>
#include <utility>

namespace quadseq::cli {

namespace {

using nlohmann::ordered_json;

const std::map<std::string, Command>& command_table() {
    static const std::map<std::string, Command> table = {
        {"cf", Command::cf},           {"pell", Command::pell},
        {"unit", Command::unit},       {"classnum", Command::classnum},
        {"certify", Command::certify}, {"search", Command::search},
        {"kbound", Command::kbound},   {"polyscan", Command::polyscan},
    };
    return table;
}

Format format_from_string(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw std::invalid_argument("unknown format: " + s);
}

Command command_from_string(const std::string& s) {
    auto it = command_table().find(s);
    if (it == command_table().end()) throw std::invalid_argument("unknown command: " + s);
    return it->second;
}

Int parse_big(const std::string& s, const char* flag) {
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        throw UsageError(4, std::string("invalid integer for ") + flag + ": '" + s + "'");
    }
}

// Runs fn(0), ..., fn(count-1), striped over at most `workers` threads.
// Exceptions are captured per thread and the first one rethrown after join.
template <typename Fn>
void run_parallel(long count, int workers, Fn&& fn) {
    long T = std::min<long>(workers, count);
    if (T <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors((size_t)T);
    std::vector<std::thread> pool;
    pool.reserve((size_t)T);
    for (long t = 0; t < T; ++t)
        pool.emplace_back([&, t] {
            try {
                for (long i = t; i < count; i += T) fn(i);
            } catch (...) {
                errors[(size_t)t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ordered_json str_array(const std::vector<Int>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

ordered_json unit_json(const cfrac::FundamentalUnit& u) {
    ordered_json j;
    j["u"] = u.u.get_str();
    j["v"] = u.v.get_str();
    j["norm"] = u.norm;
    return j;
}

void run_search(const RunConfig& cfg, Report& rep) {
    long k = *cfg.k;
    double X = *cfg.X;
    Int lo = cfg.n_min;
    Int first = (k == 0) ? Int(2) : Int(k + 1);
    if (lo < first) lo = first;
    const Int& hi = *cfg.n_max;
    long max_min_h = 0;
    std::optional<Int> hit_n;
    family::FamilyCertificate hit_cert;
    // Blocks of `workers` consecutive n, merged in ascending order, give the
    // same answer as the serial scan for every worker count.
    for (Int base = lo; base <= hi && !hit_n; base += cfg.workers) {
        long count = cfg.workers;
        if (base + (cfg.workers - 1) > hi) count = Int(hi - base + 1).get_si();
        std::vector<std::optional<family::FamilyCertificate>> certs((size_t)count);
        run_parallel(count, cfg.workers, [&](long idx) {
            certs[(size_t)idx] =
                family::certify(k, base + idx, family::CertifyLevel::class_numbers);
        });
        for (long idx = 0; idx < count; ++idx) {
            const family::FamilyCertificate& cert = *certs[(size_t)idx];
            long mh = *cert.min_h;
            max_min_h = std::max(max_min_h, mh);
            if ((double)mh > X) {
                hit_n = Int(base + idx);
                hit_cert = cert;
                break;
            }
        }
    }
    if (hit_n) {
        rep.results["found"] = true;
        rep.results["n"] = hit_n->get_str();
        rep.results["certificate"] = certificate_to_json(hit_cert);
    } else {
        rep.results["found"] = false;
        rep.results["max_min_h"] = max_min_h;
        rep.exit_code = 1;
    }
}

void run_polyscan(const RunConfig& cfg, Report& rep) {
    long k = *cfg.k;
    const Int& hi = *cfg.n_max;
    Int start = (k == 0) ? Int(2) : Int(k + 1);
    family::ScanResult total;
    if (start <= hi) {
        Int span = hi - start + 1;
        long chunks = (span < cfg.workers) ? span.get_si() : cfg.workers;
        std::vector<std::pair<Int, Int>> ranges;
        ranges.reserve((size_t)chunks);
        Int q = span / chunks;
        Int r = span % chunks;
        Int cur = start;
        for (long c = 0; c < chunks; ++c) {
            Int len = q + ((c < r) ? 1 : 0);
            ranges.emplace_back(cur, Int(cur + len - 1));
            cur += len;
        }
        std::vector<family::ScanResult> parts(ranges.size());
        run_parallel(chunks, cfg.workers, [&](long idx) {
            parts[(size_t)idx] = family::conjecture_scan_range(
                k, ranges[(size_t)idx].first, ranges[(size_t)idx].second);
        });
        for (const auto& p : parts) {
            total.count_squarefree += p.count_squarefree;
            total.count_total += p.count_total;
            total.bound_failures += p.bound_failures;
        }
        if (total.count_total > 0)
            total.density = (double)total.count_squarefree / (double)total.count_total;
    }
    auto [B, Bred] = family::conjecture_constants(k);
    rep.results["k"] = k;
    rep.results["n_max"] = hi.get_str();
    rep.results["B"] = B.get_str();
    rep.results["B_reduced"] = Bred.get_str();
    rep.results["squarefree_root_check"] = family::squarefree_root_check(k);
    rep.results["count_squarefree"] = total.count_squarefree;
    rep.results["count_total"] = total.count_total;
    rep.results["density"] = total.density;
    rep.results["bound_failures"] = total.bound_failures;
}

ordered_json config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = to_string(cfg.command);
    j["format"] = to_string(cfg.format);
    j["out"] = cfg.out_path ? ordered_json(*cfg.out_path) : ordered_json(nullptr);
    j["workers"] = cfg.workers;
    j["precision_bits"] = cfg.precision_bits;
    j["k"] = cfg.k ? ordered_json(*cfg.k) : ordered_json(nullptr);
    j["n"] = cfg.n ? ordered_json(cfg.n->get_str()) : ordered_json(nullptr);
    j["n_min"] = cfg.n_min.get_str();
    j["n_max"] = cfg.n_max ? ordered_json(cfg.n_max->get_str()) : ordered_json(nullptr);
    j["X"] = cfg.X ? ordered_json(*cfg.X) : ordered_json(nullptr);
    j["eps"] = cfg.eps ? ordered_json(*cfg.eps) : ordered_json(nullptr);
    return j;
}

RunConfig config_from_json(const ordered_json& j) {
    RunConfig cfg;
    cfg.command = command_from_string(j.at("command").get<std::string>());
    cfg.format = format_from_string(j.at("format").get<std::string>());
    if (!j.at("out").is_null()) cfg.out_path = j.at("out").get<std::string>();
    cfg.workers = j.at("workers").get<int>();
    cfg.precision_bits = j.at("precision_bits").get<unsigned>();
    if (!j.at("k").is_null()) cfg.k = j.at("k").get<long>();
    if (!j.at("n").is_null()) cfg.n = Int(j.at("n").get<std::string>());
    cfg.n_min = Int(j.at("n_min").get<std::string>());
    if (!j.at("n_max").is_null()) cfg.n_max = Int(j.at("n_max").get<std::string>());
    if (!j.at("X").is_null()) cfg.X = j.at("X").get<double>();
    if (!j.at("eps").is_null()) cfg.eps = j.at("eps").get<double>();
    return cfg;
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width(header.size());
    for (size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows)
        for (size_t c = 0; c < header.size(); ++c)
            width[c] = std::max(width[c], r[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (c) s += "  ";
            s += cells[c];
            if (c + 1 < cells.size()) s.append(width[c] - cells[c].size(), ' ');
        }
        s += "\n";
        return s;
    };
    std::string out = line(header);
    for (const auto& r : rows) out += line(r);
    return out;
}

std::string certificate_text(const ordered_json& cert) {
    std::string out;
    out += "k: " + cert.at("k").dump() + "\n";
    out += "n: " + cert.at("n").get<std::string>() + "\n";
    out += "d: " + cert.at("d").get<std::string>() + "\n";
    std::vector<std::string> header = {"i", "A", "x", "y", "N", "m", "D", "h", "h+", "L1"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : cert.at("rows")) {
        std::vector<std::string> cells = {
            row.at("i").dump(),
            row.at("A").get<std::string>(),
            row.at("x").get<std::string>(),
            row.at("y").get<std::string>(),
            row.at("N").get<std::string>(),
            row.at("m").get<std::string>(),
            row.at("D").get<std::string>(),
        };
        if (row.contains("h")) {
            cells.push_back(row.at("h").dump());
            cells.push_back(row.at("h_plus").dump());
            cells.push_back(row.at("L1").dump());
        } else {
            cells.insert(cells.end(), {"-", "-", "-"});
        }
        rows.push_back(std::move(cells));
    }
    out += format_table(header, rows);
    if (cert.contains("degenerate")) out += "degenerate: " + cert.at("degenerate").dump() + "\n";
    out += "min_h: " + cert.at("min_h").dump() + "\n";
    out += "binomial_squarefree: " + cert.at("binomial_squarefree").dump() + "\n";
    out += "unit_bound_ok: " + cert.at("unit_bound_ok").dump() + "\n";
    return out;
}

std::string render_text(const Report& rep) {
    const ordered_json& res = rep.results;
    std::string out;
    auto kv = [&](const char* key, const ordered_json& v) {
        out += std::string(key) + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    };
    switch (rep.config.command) {
    case Command::cf: {
        kv("N", res.at("N"));
        std::string head, period;
        for (const auto& q : res.at("head")) {
            if (!head.empty()) head += " ";
            head += q.get<std::string>();
        }
        for (const auto& q : res.at("period")) {
            if (!period.empty()) period += " ";
            period += q.get<std::string>();
        }
        out += "head: " + head + "\n";
        out += "period: " + period + "\n";
        break;
    }
    case Command::pell: {
        kv("N", res.at("N"));
        out += "plus: x=" + res.at("plus").at("x").get<std::string>() +
               " y=" + res.at("plus").at("y").get<std::string>() + "\n";
        if (res.at("minus").is_null())
            out += "minus: none\n";
        else
            out += "minus: x=" + res.at("minus").at("x").get<std::string>() +
                   " y=" + res.at("minus").at("y").get<std::string>() + "\n";
        break;
    }
    case Command::unit:
        for (const char* key : {"N", "m", "D", "u", "v", "norm", "regulator"})
            kv(key, res.at(key));
        break;
    case Command::classnum:
        for (const char* key : {"N", "m", "D", "h", "h_plus", "L1"}) kv(key, res.at(key));
        out += "unit: u=" + res.at("unit").at("u").get<std::string>() +
               " v=" + res.at("unit").at("v").get<std::string>() +
               " norm=" + res.at("unit").at("norm").dump() + "\n";
        kv("regulator", res.at("regulator"));
        break;
    case Command::certify:
        out += certificate_text(res);
        break;
    case Command::search:
        kv("found", res.at("found"));
        if (res.at("found").get<bool>()) {
            kv("n", res.at("n"));
            out += certificate_text(res.at("certificate"));
        } else {
            kv("max_min_h", res.at("max_min_h"));
        }
        break;
    case Command::kbound:
        for (const char* key : {"n", "eps", "k_max"}) kv(key, res.at(key));
        break;
    case Command::polyscan:
        for (const char* key : {"k", "n_max", "B", "B_reduced", "squarefree_root_check",
                                "count_squarefree", "count_total", "density", "bound_failures"})
            kv(key, res.at(key));
        break;
    }
    return out;
}

std::string render_csv(const Report& rep) {
    std::string out = std::string(kCsvHeader) + "\n";
    const ordered_json* cert = nullptr;
    if (rep.config.command == Command::certify) {
        cert = &rep.results;
    } else if (rep.config.command == Command::search) {
        if (rep.results.at("found").get<bool>()) cert = &rep.results.at("certificate");
    } else {
        throw UsageError(4, "csv output is only available for certify and search");
    }
    if (!cert) return out;
    std::string k = cert->at("k").dump();
    std::string n = cert->at("n").get<std::string>();
    for (const auto& row : cert->at("rows")) {
        out += k + "," + n;
        for (const char* key : {"i", "A", "x", "y", "N", "m", "D"}) {
            const auto& v = row.at(key);
            out += "," + (v.is_string() ? v.get<std::string>() : v.dump());
        }
        out += "," + row.at("h").dump();
        out += "," + row.at("unit").at("norm").dump();
        out += "," + row.at("L1").dump();
        out += "\n";
    }
    return out;
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
    case Command::cf: return "cf";
    case Command::pell: return "pell";
    case Command::unit: return "unit";
    case Command::classnum: return "classnum";
    case Command::certify: return "certify";
    case Command::search: return "search";
    case Command::kbound: return "kbound";
    case Command::polyscan: return "polyscan";
    }
    return "";
}

const char* to_string(Format f) {
    switch (f) {
    case Format::text: return "text";
    case Format::json: return "json";
    case Format::csv: return "csv";
    }
    return "";
}

RunConfig parse_args(const std::vector<std::string>& args) {
    // CLI11 reports an unknown leading word as a missing subcommand; classify
    // it as an unknown-command usage error first so the exit code is 2.
    if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
        command_table().find(args[0]) == command_table().end())
        throw UsageError(2, "unknown command: '" + args[0] + "'");
    // Likewise a missing subcommand preempts unmatched flags inside CLI11;
    // when no subcommand is present, spot a flag no command defines so the
    // exit code stays 2, as it would be with a subcommand parsed.
    bool has_sub = false;
    for (const auto& a : args)
        if (command_table().count(a)) {
            has_sub = true;
            break;
        }
    if (!has_sub) {
        static const std::set<std::string> known = {
            "--format", "--out", "--workers", "--precision", "--help", "--help-all",
            "--version", "--k",  "--n",       "--n-min",     "--n-max", "--X",
            "--eps",
        };
        for (const auto& a : args) {
            if (a == "--") break;
            if (a.size() < 2 || a[0] != '-') continue;
            if (a[1] != '-' && !std::isalpha((unsigned char)a[1])) continue;
            std::string name = a.substr(0, a.find('='));
            if (!known.count(name)) throw UsageError(2, "unknown flag: '" + name + "'");
        }
    }

    CLI::App app{"continued fractions, Pell equations, class numbers, and unit"
                 " families of real quadratic fields"};
    app.name("quadseq");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    app.set_help_all_flag("--help-all", "print help for every command");

    std::string format_str = "text";
    std::string out_path;
    int workers = 1;
    unsigned precision = 128;
    app.add_option("--format", format_str, "output format: text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    CLI::Option* out_opt =
        app.add_option("--out", out_path, "write the rendered report to PATH instead of stdout");
    app.add_option("--workers", workers,
                   "worker threads for search and polyscan (env QUADSEQ_WORKERS)")
        ->check(CLI::Range(1, 256))
        ->envname("QUADSEQ_WORKERS")
        ->capture_default_str();
    app.add_option("--precision", precision,
                   "working precision in bits for L-values and regulators"
                   " (env QUADSEQ_PRECISION)")
        ->check(CLI::Range(16u, 1048576u))
        ->envname("QUADSEQ_PRECISION")
        ->capture_default_str();

    long k_val = 0;
    std::string n_str, nmin_str = "2", nmax_str;
    double X_val = 0.0, eps_val = 0.0;

    auto add_sub = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        return sub;
    };
    CLI::App* cf = add_sub("cf", "continued fraction expansion of sqrt(N)");
    cf->add_option("--n", n_str, "radicand N (>= 2, non-square)")->required();
    CLI::App* pell = add_sub("pell", "minimal solutions of x^2 - N y^2 = +-1");
    pell->add_option("--n", n_str, "radicand N (>= 2, non-square)")->required();
    CLI::App* unit = add_sub("unit", "fundamental unit and regulator of Q(sqrt N)");
    unit->add_option("--n", n_str, "radicand N (>= 2, non-square)")->required();
    CLI::App* classnum = add_sub("classnum", "class number and invariants of Q(sqrt N)");
    classnum->add_option("--n", n_str, "radicand N (>= 2, non-square)")->required();
    CLI::App* certify =
        add_sub("certify", "certificate for the k+1 consecutive fields at a given n");
    certify->add_option("--k", k_val, "family parameter k (>= 0)")->required();
    certify->add_option("--n", n_str, "family parameter n (> k)")->required();
    CLI::App* search =
        add_sub("search", "smallest n whose k+1 fields all have class number > X");
    search->add_option("--k", k_val, "family parameter k (>= 0)")->required();
    search->add_option("--X", X_val, "class number target")->required();
    search->add_option("--n-min", nmin_str, "search from this n (default 2)");
    search->add_option("--n-max", nmax_str, "search up to this n")->required();
    CLI::App* kbound = add_sub("kbound", "largest usable k for a given n");
    kbound->add_option("--n", n_str, "family parameter n (>= 3)")->required();
    kbound->add_option("--eps", eps_val, "margin in (0, 0.1)")->required();
    CLI::App* polyscan =
        add_sub("polyscan", "squarefree density of the family polynomial over n <= n-max");
    polyscan->add_option("--k", k_val, "family parameter k (>= 0)")->required();
    polyscan->add_option("--n-max", nmax_str, "scan up to this n")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        auto subs = app.get_subcommands();
        throw InfoRequested{subs.empty() ? app.help() : subs.front()->help()};
    } catch (const CLI::CallForAllHelp&) {
        throw InfoRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::CallForVersion& e) {
        throw InfoRequested{e.what()};
    } catch (const CLI::ExtrasError& e) {
        throw UsageError(2, e.what());
    } catch (const CLI::ArgumentMismatch& e) {
        throw UsageError(3, e.what());
    } catch (const CLI::RequiredError& e) {
        throw UsageError(3, e.what());
    } catch (const CLI::ParseError& e) {
        throw UsageError(4, e.what());
    }

    RunConfig cfg;
    cfg.command = command_from_string(app.get_subcommands().front()->get_name());
    cfg.format = format_from_string(format_str);
    if (out_opt->count() > 0) cfg.out_path = out_path;
    cfg.workers = workers;
    cfg.precision_bits = precision;

    switch (cfg.command) {
    case Command::cf:
    case Command::pell:
    case Command::unit:
    case Command::classnum:
        cfg.n = parse_big(n_str, "--n");
        if (*cfg.n < 2) throw UsageError(4, "--n must be >= 2");
        if (arith::is_square(*cfg.n)) throw UsageError(4, "--n must not be a perfect square");
        break;
    case Command::certify:
        if (k_val < 0) throw UsageError(4, "--k must be >= 0");
        cfg.k = k_val;
        cfg.n = parse_big(n_str, "--n");
        if (*cfg.n <= k_val) throw UsageError(4, "--n must exceed --k");
        if (k_val == 0 && *cfg.n < 2) throw UsageError(4, "--n must be >= 2 when --k is 0");
        break;
    case Command::search:
        if (k_val < 0) throw UsageError(4, "--k must be >= 0");
        cfg.k = k_val;
        cfg.X = X_val;
        cfg.n_min = parse_big(nmin_str, "--n-min");
        cfg.n_max = parse_big(nmax_str, "--n-max");
        break;
    case Command::kbound:
        cfg.n = parse_big(n_str, "--n");
        if (*cfg.n < 3) throw UsageError(4, "--n must be >= 3");
        if (!(eps_val > 0.0 && eps_val < 0.1))
            throw UsageError(4, "--eps must lie strictly between 0 and 0.1");
        cfg.eps = eps_val;
        break;
    case Command::polyscan:
        if (k_val < 0) throw UsageError(4, "--k must be >= 0");
        cfg.k = k_val;
        cfg.n_max = parse_big(nmax_str, "--n-max");
        break;
    }
    if (cfg.format == Format::csv &&
        cfg.command != Command::certify && cfg.command != Command::search)
        throw UsageError(4, "csv output is only available for certify and search");
    return cfg;
}

Report run(const RunConfig& cfg) {
    classgroup::set_precision_bits(cfg.precision_bits);
    Report rep;
    rep.version = kVersion;
    rep.config = cfg;
    auto t0 = std::chrono::steady_clock::now();
    switch (cfg.command) {
    case Command::cf: {
        cfrac::CFExpansion e = cfrac::cf_expand(cfrac::QuadSurd::sqrt_of(*cfg.n));
        rep.results["N"] = cfg.n->get_str();
        rep.results["head"] = str_array(e.head);
        rep.results["period"] = str_array(e.period);
        break;
    }
    case Command::pell: {
        cfrac::PellPair p = cfrac::pell_min(*cfg.n);
        rep.results["N"] = cfg.n->get_str();
        rep.results["plus"] = {{"x", p.plus.x.get_str()}, {"y", p.plus.y.get_str()}};
        rep.results["minus"] =
            p.minus ? ordered_json{{"x", p.minus->x.get_str()}, {"y", p.minus->y.get_str()}}
                    : ordered_json(nullptr);
        break;
    }
    case Command::unit: {
        Int D = classgroup::fundamental_discriminant(*cfg.n);
        cfrac::FundamentalUnit u = cfrac::fundamental_unit(D);
        rep.results["N"] = cfg.n->get_str();
        rep.results["m"] = arith::squarefree_part(*cfg.n).get_str();
        rep.results["D"] = D.get_str();
        rep.results["u"] = u.u.get_str();
        rep.results["v"] = u.v.get_str();
        rep.results["norm"] = u.norm;
        rep.results["regulator"] = classgroup::regulator(u);
        break;
    }
    case Command::classnum: {
        classgroup::FieldInvariants inv = classgroup::class_number(*cfg.n);
        rep.results["N"] = inv.radicand.get_str();
        rep.results["m"] = inv.m.get_str();
        rep.results["D"] = inv.D.get_str();
        rep.results["h"] = inv.h;
        rep.results["h_plus"] = inv.h_plus;
        rep.results["L1"] = inv.L1;
        rep.results["unit"] = unit_json(inv.unit);
        rep.results["regulator"] = classgroup::regulator(inv.unit);
        break;
    }
    case Command::certify:
        rep.results = certificate_to_json(family::certify(*cfg.k, *cfg.n));
        break;
    case Command::search:
        run_search(cfg, rep);
        break;
    case Command::kbound:
        rep.results["n"] = cfg.n->get_str();
        rep.results["eps"] = *cfg.eps;
        rep.results["k_max"] = family::remark1_k_bound(*cfg.n, *cfg.eps);
        break;
    case Command::polyscan:
        run_polyscan(cfg, rep);
        break;
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

ordered_json certificate_to_json(const family::FamilyCertificate& cert) {
    const family::FamilyInstance& inst = cert.instance;
    ordered_json j;
    j["k"] = inst.k;
    j["n"] = inst.n.get_str();
    j["d"] = inst.d.get_str();
    ordered_json rows = ordered_json::array();
    for (size_t idx = 0; idx < inst.rows.size(); ++idx) {
        const family::FamilyRow& r = inst.rows[idx];
        ordered_json row;
        row["i"] = r.i;
        row["A"] = r.A.get_str();
        row["x"] = r.x.get_str();
        row["y"] = r.y.get_str();
        row["N"] = r.N.get_str();
        row["m"] = r.m.get_str();
        row["D"] = r.D.get_str();
        if (idx < cert.invariants.size()) {
            const classgroup::FieldInvariants& inv = cert.invariants[idx];
            row["unit"] = unit_json(inv.unit);
            row["h_plus"] = inv.h_plus;
            row["h"] = inv.h;
            row["L1"] = inv.L1;
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    if (!inst.degenerate.empty()) j["degenerate"] = inst.degenerate;
    j["min_h"] = cert.min_h ? ordered_json(*cert.min_h) : ordered_json(nullptr);
    j["binomial_squarefree"] = cert.binomial_squarefree;
    j["unit_bound_ok"] = cert.unit_bound_ok;
    return j;
}

family::FamilyCertificate certificate_from_json(const ordered_json& j) {
    family::FamilyCertificate cert;
    family::FamilyInstance& inst = cert.instance;
    inst.k = j.at("k").get<long>();
    inst.n = Int(j.at("n").get<std::string>());
    inst.d = Int(j.at("d").get<std::string>());
    for (const auto& row : j.at("rows")) {
        family::FamilyRow r;
        r.i = row.at("i").get<long>();
        r.A = Int(row.at("A").get<std::string>());
        r.x = Int(row.at("x").get<std::string>());
        r.y = Int(row.at("y").get<std::string>());
        r.N = Int(row.at("N").get<std::string>());
        r.m = Int(row.at("m").get<std::string>());
        r.D = Int(row.at("D").get<std::string>());
        if (row.contains("unit")) {
            classgroup::FieldInvariants inv;
            inv.radicand = r.N;
            inv.m = r.m;
            inv.D = r.D;
            inv.unit.u = Int(row.at("unit").at("u").get<std::string>());
            inv.unit.v = Int(row.at("unit").at("v").get<std::string>());
            inv.unit.D = r.D;
            inv.unit.norm = row.at("unit").at("norm").get<int>();
            inv.h_plus = row.at("h_plus").get<long>();
            inv.h = row.at("h").get<long>();
            inv.L1 = row.at("L1").get<double>();
            cert.invariants.push_back(std::move(inv));
        }
        inst.rows.push_back(std::move(r));
    }
    if (j.contains("degenerate")) inst.degenerate = j.at("degenerate").get<std::vector<long>>();
    if (!j.at("min_h").is_null()) cert.min_h = j.at("min_h").get<long>();
    cert.binomial_squarefree = j.at("binomial_squarefree").get<bool>();
    cert.unit_bound_ok = j.at("unit_bound_ok").get<bool>();
    return cert;
}

ordered_json report_to_json(const Report& rep) {
    ordered_json j;
    j["version"] = rep.version;
    j["config"] = config_to_json(rep.config);
    j["results"] = rep.results;
    j["timing"] = ordered_json{{"wall_seconds", rep.wall_seconds}};
    return j;
}

Report report_from_json(const ordered_json& j) {
    Report rep;
    rep.version = j.at("version").get<std::string>();
    rep.config = config_from_json(j.at("config"));
    rep.results = j.at("results");
    rep.wall_seconds = j.at("timing").at("wall_seconds").get<double>();
    if (rep.config.command == Command::search && !rep.results.at("found").get<bool>())
        rep.exit_code = 1;
    return rep;
}

std::string render(const Report& rep, Format format) {
    switch (format) {
    case Format::json: return report_to_json(rep).dump(2) + "\n";
    case Format::csv: return render_csv(rep);
    case Format::text: return render_text(rep);
    }
    return "";
}

void emit(const Report& rep, Format format, const std::optional<std::string>& path) {
    std::string text = render(rep, format);
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw UsageError(5, "cannot open for writing: " + *path);
    out << text;
    out.flush();
    if (!out) throw UsageError(5, "write failed: " + *path);
}

}  // namespace quadseq::cli
