// lehmer-hunt: Lehmer-property checks, sieve searches, repunit family
// searches, bound tables, and seeded verification suites.
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lehmer/bounds.hpp"
#include "lehmer/lehmer.hpp"
#include "lehmer/repunit_search.hpp"
#include "lehmer/verify.hpp"

namespace {

// Exit codes: 0 ok/empty, 1 usage or resource error, 2 unresolved verdicts
// present, 3 candidate or violation found.
enum ExitCode { kOk = 0, kError = 1, kUnresolved = 2, kFound = 3 };

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

int search_exit_code(const lehmer::SearchReport& report) {
    if (report.lehmer_count() > 0) return kFound;
    if (report.unresolved_count() > 0) return kUnresolved;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lehmer-hunt: exact Lehmer-property toolkit"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "Write the report to this path instead of stdout");

    // check <n>
    auto* cmd_check = app.add_subcommand("check", "Decide the Lehmer property of one number");
    std::string check_n;
    unsigned long check_effort = 2'000'000;
    cmd_check->add_option("n", check_n, "Decimal subject")->required();
    cmd_check->add_option("--effort", check_effort, "Pollard rho iteration budget");

    // search <limit>
    auto* cmd_search = app.add_subcommand("search", "Exhaustive sieve search for phi(n) | n-1");
    std::string search_limit;
    unsigned search_workers = 1;
    cmd_search->add_option("limit", search_limit, "Scan composites up to this bound")->required();
    cmd_search->add_option("--workers", search_workers, "Worker threads");

    // repunit --L ... --mode ...
    auto* cmd_repunit = app.add_subcommand("repunit", "Search the repunit families A(L)/B(L)");
    std::string rep_L, rep_mode = "union", rep_nmax = "10000", rep_checkpoint, rep_format = "json";
    unsigned long rep_budget = 256, rep_effort = 20'000;
    unsigned rep_workers = 1;
    cmd_repunit->add_option("--L", rep_L, "Family parameter L >= 1 (integer, decimal, or p/q)")
        ->required();
    cmd_repunit->add_option("--mode", rep_mode, "even | odd | union")
        ->check(CLI::IsMember({"even", "odd", "union"}));
    cmd_repunit->add_option("--n-max", rep_nmax, "Exponent cap for the odd-base family");
    cmd_repunit->add_option("--budget", rep_budget, "Repunit evaluations before the frontier");
    cmd_repunit->add_option("--effort", rep_effort, "Pollard rho iteration budget per candidate");
    cmd_repunit->add_option("--workers", rep_workers, "Worker threads");
    cmd_repunit->add_option("--checkpoint", rep_checkpoint, "Resumable unit checkpoint file");
    cmd_repunit->add_option("--format", rep_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // verify <suite>
    auto* cmd_verify = app.add_subcommand("verify", "Run a seeded property suite");
    std::string verify_suite;
    std::uint64_t verify_trials = 1000, verify_seed = 1;
    cmd_verify->add_option("suite", verify_suite, "nielsen | chain | valuation | bounds")
        ->required();
    cmd_verify->add_option("--trials", verify_trials, "Trial count");
    cmd_verify->add_option("--seed", verify_seed, "PRNG seed");

    // bounds
    auto* cmd_bounds = app.add_subcommand("bounds", "Print the upper-bound table over K");
    unsigned bounds_kmin = 1, bounds_kmax = 8;
    std::string bounds_format = "json";
    cmd_bounds->add_option("--k-min", bounds_kmin, "First K");
    cmd_bounds->add_option("--k-max", bounds_kmax, "Last K");
    cmd_bounds->add_option("--format", bounds_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_check->parsed()) {
            lehmer::FactorEffort effort;
            effort.rho_iterations = check_effort;
            lehmer::LehmerVerdict v = lehmer::check_lehmer(lehmer::parse_nat(check_n), effort);
            nlohmann::json j = v;
            emit(j.dump(2), out_path);
            return v.decided() ? kOk : kUnresolved;
        }

        if (cmd_search->parsed()) {
            lehmer::SearchReport report =
                lehmer::exhaustive_search(lehmer::parse_nat(search_limit), search_workers);
            nlohmann::json j = report;
            emit(j.dump(2), out_path);
            return report.candidates.empty() ? kOk : kFound;
        }

        if (cmd_repunit->parsed()) {
            lehmer::LParam L = lehmer::LParam::parse(rep_L);
            lehmer::SearchConfig cfg;
            cfg.factor_effort.rho_iterations = rep_effort;
            cfg.workers = rep_workers;
            cfg.checkpoint_path = rep_checkpoint;
            cfg.repunit_budget = rep_budget;
            lehmer::SearchReport report;
            if (rep_mode == "even") {
                report = lehmer::search_A(L, cfg);
            } else if (rep_mode == "odd") {
                report = lehmer::search_B(L, lehmer::parse_nat(rep_nmax), cfg);
            } else {
                report = lehmer::search_union(L, lehmer::parse_nat(rep_nmax), cfg);
            }
            if (rep_format == "csv") {
                emit(lehmer::candidates_csv(report), out_path);
            } else {
                nlohmann::json j = report;
                emit(j.dump(2), out_path);
            }
            return search_exit_code(report);
        }

        if (cmd_verify->parsed()) {
            lehmer::VerifyReport rep =
                lehmer::run_verify_suite(verify_suite, verify_trials, verify_seed);
            emit(lehmer::verify_report_json(rep).dump(2), out_path);
            return rep.violations == 0 ? kOk : kFound;
        }

        if (cmd_bounds->parsed()) {
            if (bounds_kmin < 1 || bounds_kmax < bounds_kmin) {
                throw lehmer::domain_error("bounds: need 1 <= k-min <= k-max");
            }
            nlohmann::json rows = nlohmann::json::array();
            std::string csv = "K,new_bound,pomerance_bound,new_le_pomerance,strict,method\n";
            for (unsigned K = bounds_kmin; K <= bounds_kmax; ++K) {
                lehmer::BoundCompare cmp = lehmer::compare_bounds(K);
                const std::string nb = lehmer::to_decimal(lehmer::new_bound(K));
                const std::string pb = lehmer::to_decimal(lehmer::pomerance_bound(K));
                rows.push_back({{"K", K},
                                {"new_bound", nb},
                                {"pomerance_bound", pb},
                                {"new_le_pomerance", cmp.new_le_pom},
                                {"strict", cmp.strict},
                                {"method", cmp.method}});
                csv += std::to_string(K) + "," + nb + "," + pb + "," +
                       (cmp.new_le_pom ? "true" : "false") + "," +
                       (cmp.strict ? "true" : "false") + "," + cmp.method + "\n";
            }
            if (bounds_format == "csv") {
                emit(csv, out_path);
            } else {
                emit(nlohmann::json{{"bounds", rows}}.dump(2), out_path);
            }
            return kOk;
        }
    } catch (const lehmer::resource_error& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return kError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}
