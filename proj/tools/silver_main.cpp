#include <silver/certificate.hpp>
#include <silver/engine.hpp>
#include <silver/schedule.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using nlohmann::ordered_json;
using namespace silver;

// Deterministic shortest-faithful rendering of a double (17 significant
// digits round-trips).
std::string fmt(double v, int digits = 17) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

long env_or(long flag_value, long fallback) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("SILVER_BITS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 64) return v;
    }
    return fallback;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

// ---- schedule ----------------------------------------------------------

int cmd_schedule(int k, const std::string& format, int digits, const std::string& out_path) {
    const Schedule sched = schedule_direct(k);
    std::ostringstream os;
    if (format == "csv") {
        os << "t,exact,decimal\n";
        for (std::size_t t = 0; t < sched.steps.size(); ++t) {
            os << t << "," << sched.steps[t].to_string() << ","
               << MpfrInterval::from_radical(sched.steps[t], 256).to_decimal(digits) << "\n";
        }
    } else if (format == "exact") {
        for (const RadicalScalar& step : sched.steps) os << step.to_string() << "\n";
    } else {
        ordered_json doc;
        doc["k"] = k;
        doc["horizon"] = sched.horizon();
        doc["steps"] = ordered_json::array();
        for (std::size_t t = 0; t < sched.steps.size(); ++t) {
            ordered_json row;
            row["t"] = t;
            row["exact"] = sched.steps[t].to_string();
            row["decimal"] = MpfrInterval::from_radical(sched.steps[t], 256).to_decimal(digits);
            doc["steps"].push_back(row);
        }
        os << doc.dump(2) << "\n";
    }
    emit(os.str(), out_path);
    return 0;
}

// ---- cert --------------------------------------------------------------

int cmd_cert(int k, const std::string& format, const std::string& out_path) {
    const MultiplierMatrix cert = k == 0 ? base_cert_n0() : build_cert(k);
    emit(export_cert(cert, format == "csv" ? ExportFormat::Csv : ExportFormat::Exact), out_path);
    return 0;
}

// ---- verify ------------------------------------------------------------

int cmd_verify(int k_max, const std::string& report_format, long bits, bool inject_fault) {
    std::vector<VerifyReport> reports;
    bool all_pass = true;
    for (int k = 1; k <= k_max; ++k) {
        MultiplierMatrix cert = build_cert(k);
        if (inject_fault) {
            const Index star = Index::star_index();
            const Index last = Index::iterate((1 << k) - 1);
            cert.set(star, last, cert.at(star, last) + CertScalar(1));
        }
        VerifyReport rep = verify(cert, k, bits);
        rep.helper_linear_ok = helper_linear_forms(k).ok;
        rep.helper_quadratic_ok = helper_quadratic_forms(k).ok;
        all_pass = all_pass && rep.full_pass();
        reports.push_back(std::move(rep));
    }

    if (report_format == "json") {
        ordered_json doc;
        doc["k_max"] = k_max;
        doc["sign_bits_cap"] = bits;
        doc["all_pass"] = all_pass;
        doc["reports"] = ordered_json::array();
        for (const VerifyReport& r : reports) {
            ordered_json row;
            row["k"] = r.k;
            row["horizon"] = (1 << r.k) - 1;
            row["identity_ok"] = r.identity_ok;
            row["residual_canonically_zero"] = r.residual_canonically_zero;
            row["residual_max_abs"] = r.residual_max_abs.to_decimal(6);
            if (!r.residual_detail.empty()) row["residual_detail"] = r.residual_detail;
            row["nonneg_ok"] = r.nonneg_ok;
            if (!r.nonneg_detail.empty()) row["nonneg_detail"] = r.nonneg_detail;
            row["sparsity_ok"] = r.sparsity_ok;
            row["lemma2_ok"] = r.lemma2_ok;
            row["helper_linear_ok"] = r.helper_linear_ok.value();
            row["helper_quadratic_ok"] = r.helper_quadratic_ok.value();
            row["pass"] = r.full_pass();
            doc["reports"].push_back(row);
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        auto word = [](bool b) { return b ? "ok" : "FAIL"; };
        for (const VerifyReport& r : reports) {
            std::cout << "k=" << r.k << " n=" << ((1 << r.k) - 1)
                      << ": identity=" << word(r.identity_ok)
                      << " nonneg=" << word(r.nonneg_ok)
                      << " sparsity=" << word(r.sparsity_ok)
                      << " star-formulas=" << word(r.lemma2_ok)
                      << " linear-decomposition=" << word(r.helper_linear_ok.value())
                      << " quadratic-decomposition=" << word(r.helper_quadratic_ok.value())
                      << " -> " << (r.full_pass() ? "PASS" : "FAIL") << "\n";
            if (!r.residual_detail.empty())
                std::cout << "  residual: " << r.residual_detail
                          << " (max |coeff| ~ " << r.residual_max_abs.to_decimal(6) << ")\n";
            if (!r.nonneg_detail.empty()) std::cout << "  " << r.nonneg_detail << "\n";
        }
        std::cout << "sign precision cap: " << bits << " bits\n";
        std::cout << "verify: " << (all_pass ? "all " + std::to_string(k_max) + " levels PASS"
                                             : "FAILED") << "\n";
    }
    return all_pass ? 0 : 1;
}

// ---- run / audit helpers ----------------------------------------------

struct MethodSpec {
    std::string kind;  // "silver", "constant", "nesterov"
    double alpha_bar = 1.0;
};

MethodSpec parse_method(const std::string& text) {
    MethodSpec m;
    if (text == "silver" || text == "nesterov") {
        m.kind = text;
        return m;
    }
    if (text.rfind("constant:", 0) == 0) {
        m.kind = "constant";
        const std::string tail = text.substr(9);
        std::size_t used = 0;
        try {
            m.alpha_bar = std::stod(tail, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tail.size() || tail.empty()) {
            throw std::invalid_argument("bad constant stepsize: " + text);
        }
        return m;
    }
    throw std::invalid_argument("unknown schedule: " + text +
                                " (expected silver, constant:<a>, or nesterov)");
}

Vector starting_point(const Oracle& oracle, std::uint64_t seed) {
    // Derived stream so the start is independent of the oracle's own draws.
    GaussianSource rng(seed ^ 0x9e3779b97f4a7c15ULL);
    return oracle.minimizer() + rng.vector(oracle.dimension());
}

Trajectory run_method(const Oracle& oracle, const Vector& x0, const MethodSpec& m, int k) {
    const int n = (1 << k) - 1;
    if (m.kind == "silver") {
        Trajectory t = run_gd(oracle, x0, schedule_direct(k).to_doubles());
        t.schedule_name = "silver";
        return t;
    }
    if (m.kind == "constant") return run_constant(oracle, x0, m.alpha_bar, n);
    return run_nesterov(oracle, x0, n);
}

int cmd_run(const std::string& fn, int dim, std::uint64_t seed, int k,
            const std::string& method_text, const std::string& out_path) {
    const MethodSpec method = parse_method(method_text);
    const auto oracle = make_oracle(fn, dim, seed);
    const Vector x0 = starting_point(*oracle, seed);
    const Trajectory traj = run_method(*oracle, x0, method, k);
    const double fstar = oracle->min_value();

    std::ostringstream os;
    os << "t,gap,grad_norm,alpha\n";
    for (int t = 0; t <= traj.horizon(); ++t) {
        os << t << "," << fmt(traj.values[t] - fstar) << "," << fmt(traj.gradients[t].norm())
           << ",";
        if (t < traj.horizon()) os << fmt(traj.steps_used[t]);
        os << "\n";
    }
    emit(os.str(), out_path);
    return 0;
}

int cmd_audit(const std::string& fn, int dim, std::uint64_t seed, int k,
              const std::string& method_text) {
    const MethodSpec method = parse_method(method_text);
    const auto oracle = make_oracle(fn, dim, seed);
    const Vector x0 = starting_point(*oracle, seed);
    const Trajectory traj = run_method(*oracle, x0, method, k);
    const Vector xstar = oracle->minimizer();
    const double fstar = oracle->min_value();
    const int n = traj.horizon();

    std::cout << "objective=" << fn << " dim=" << dim << " seed=" << seed
              << " schedule=" << traj.schedule_name << " k=" << k << " n=" << n << "\n";

    const AuditResult audit = cocoercivity_audit(traj, xstar, fstar);
    const bool coco_ok = audit.min_q >= -1e-9 * audit.scale;
    std::cout << "min co-coercivity Q = " << fmt(audit.min_q, 6) << " at (" << audit.argmin_i
              << "," << audit.argmin_j << "), threshold " << fmt(-1e-9 * audit.scale, 6)
              << " -> " << (coco_ok ? "OK" : "NEGATIVE (inconsistent with smooth convex)")
              << "\n";

    bool bound_ok = true;
    const double dist2 = traj.smoothness * (x0 - xstar).squaredNorm();
    const double gap = traj.values.back() - fstar;
    if (method.kind == "silver") {
        const BoundCheck b = bound_check(traj, xstar, fstar, k);
        bound_ok = b.pass;
        std::cout << "rate bound (level " << k << "): gap " << fmt(b.lhs, 6) << " vs "
                  << fmt(b.rhs, 6) << " -> " << (b.pass ? "PASS" : "FAIL") << "\n";
    } else if (method.kind == "constant" && method.alpha_bar == 1.0) {
        const double rhs = dist2 / (4.0 * n);
        bound_ok = gap <= rhs * (1.0 + 1e-9);
        std::cout << "rate bound (unit constant step): gap " << fmt(gap, 6) << " vs "
                  << fmt(rhs, 6) << " -> " << (bound_ok ? "PASS" : "FAIL") << "\n";
    } else if (method.kind == "nesterov") {
        const double rhs = 2.0 * dist2 / ((n + 1.0) * (n + 1.0));
        bound_ok = gap <= rhs * (1.0 + 1e-9);
        std::cout << "rate bound (accelerated baseline): gap " << fmt(gap, 6) << " vs "
                  << fmt(rhs, 6) << " -> " << (bound_ok ? "PASS" : "FAIL") << "\n";
    } else {
        std::cout << "rate bound: not applicable for this schedule\n";
    }
    return (coco_ok && bound_ok) ? 0 : 1;
}

// ---- compare -----------------------------------------------------------

int cmd_compare(int k_min, int k_max, long bits, bool measured, const std::string& fn, int dim,
                std::uint64_t seed, const std::string& out_path) {
    std::ostringstream os;
    os << "k,n,const_bound,silver_bound,nesterov_bound";
    if (measured) os << ",measured_constant,measured_silver,measured_nesterov";
    os << "\n";
    for (int k = k_min; k <= k_max; ++k) {
        const long n = (1L << k) - 1;
        const double const_bound = 1.0 / (4.0 * static_cast<double>(n));
        const double nesterov_bound = 2.0 / (static_cast<double>(n + 1) * static_cast<double>(n + 1));
        os << k << "," << n << "," << fmt(const_bound) << ","
           << rate(k, bits).r.to_decimal(17) << "," << fmt(nesterov_bound);
        if (measured) {
            const auto oracle = make_oracle(fn, dim, seed);
            const Vector x0 = starting_point(*oracle, seed);
            const double fstar = oracle->min_value();
            const Trajectory tc = run_constant(*oracle, x0, 1.0, static_cast<int>(n));
            Trajectory ts = run_gd(*oracle, x0, schedule_direct(k).to_doubles());
            const Trajectory tn = run_nesterov(*oracle, x0, static_cast<int>(n));
            os << "," << fmt(tc.values.back() - fstar) << "," << fmt(ts.values.back() - fstar)
               << "," << fmt(tn.values.back() - fstar);
        }
        os << "\n";
    }
    emit(os.str(), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"silver: exact stepsize schedules, rate certificates, and descent runs"};
    app.require_subcommand(1);

    // schedule
    auto* sub_schedule = app.add_subcommand("schedule", "Emit the level-k stepsize schedule");
    int sched_k = 1;
    std::string sched_format = "csv";
    int sched_digits = 17;
    std::string sched_out;
    sub_schedule->add_option("--k", sched_k, "Level (horizon 2^k - 1)")
        ->required()
        ->check(CLI::Range(1, 24));
    sub_schedule->add_option("--format", sched_format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "exact"}));
    sub_schedule->add_option("--digits", sched_digits, "Significant digits for decimals")
        ->check(CLI::Range(2, 40));
    sub_schedule->add_option("--out", sched_out, "Write to file instead of stdout");

    // cert
    auto* sub_cert = app.add_subcommand("cert", "Dump the level-k certificate multipliers");
    int cert_k = 1;
    std::string cert_format = "exact";
    std::string cert_out;
    sub_cert->add_option("--k", cert_k, "Level (0 for the one-step base certificate)")
        ->required()
        ->check(CLI::Range(0, 10));
    sub_cert->add_option("--format", cert_format, "Output format")
        ->check(CLI::IsMember({"exact", "csv"}));
    sub_cert->add_option("--out", cert_out, "Write to file instead of stdout");

    // verify
    auto* sub_verify = app.add_subcommand("verify", "Exactly verify the rate certificates");
    int verify_kmax = 6;
    std::string verify_report = "text";
    long verify_bits = 0;
    bool verify_fault = false;
    sub_verify->add_option("--k-max", verify_kmax, "Verify levels 1..k-max")
        ->check(CLI::Range(1, 8));
    sub_verify->add_option("--report", verify_report, "Report format")
        ->check(CLI::IsMember({"text", "json"}));
    sub_verify->add_option("--bits", verify_bits, "Precision cap for sign checks");
    sub_verify->add_flag("--inject-fault", verify_fault)->group("");  // test hook

    // run
    auto* sub_run = app.add_subcommand("run", "Run gradient descent and emit the trajectory");
    std::string run_fn = "quadratic";
    int run_dim = 5;
    std::uint64_t run_seed = 0;
    int run_k = 3;
    std::string run_method = "silver";
    std::string run_out;
    sub_run->add_option("--fn", run_fn, "Objective")
        ->check(CLI::IsMember({"quadratic", "logsumexp", "huber"}));
    sub_run->add_option("--dim", run_dim, "Dimension")->check(CLI::Range(1, 1000));
    sub_run->add_option("--seed", run_seed, "Random seed");
    sub_run->add_option("--k", run_k, "Level (horizon 2^k - 1)")->check(CLI::Range(1, 20));
    sub_run->add_option("--schedule", run_method, "silver, constant:<a>, or nesterov");
    sub_run->add_option("--out", run_out, "Write CSV to file instead of stdout");

    // audit
    auto* sub_audit = app.add_subcommand("audit", "Audit co-coercivity and the rate bound");
    std::string audit_fn = "quadratic";
    int audit_dim = 5;
    std::uint64_t audit_seed = 0;
    int audit_k = 3;
    std::string audit_method = "silver";
    sub_audit->add_option("--fn", audit_fn, "Objective")
        ->check(CLI::IsMember({"quadratic", "logsumexp", "huber"}));
    sub_audit->add_option("--dim", audit_dim, "Dimension")->check(CLI::Range(1, 1000));
    sub_audit->add_option("--seed", audit_seed, "Random seed");
    sub_audit->add_option("--k", audit_k, "Level (horizon 2^k - 1)")->check(CLI::Range(1, 20));
    sub_audit->add_option("--schedule", audit_method, "silver, constant:<a>, or nesterov");

    // compare
    auto* sub_compare = app.add_subcommand("compare", "Emit the rate-bound curves");
    int cmp_kmin = 1, cmp_kmax = 6;
    long cmp_bits = 0;
    bool cmp_measured = false;
    std::string cmp_fn = "quadratic";
    int cmp_dim = 5;
    std::uint64_t cmp_seed = 0;
    std::string cmp_out;
    sub_compare->add_option("--k-min", cmp_kmin, "First level")->check(CLI::Range(1, 20));
    sub_compare->add_option("--k-max", cmp_kmax, "Last level")->check(CLI::Range(1, 20));
    sub_compare->add_option("--bits", cmp_bits, "Interval evaluation precision");
    sub_compare->add_flag("--measured", cmp_measured, "Also run each method and report gaps");
    sub_compare->add_option("--fn", cmp_fn, "Objective for measured runs")
        ->check(CLI::IsMember({"quadratic", "logsumexp", "huber"}));
    sub_compare->add_option("--dim", cmp_dim, "Dimension for measured runs")
        ->check(CLI::Range(1, 1000));
    sub_compare->add_option("--seed", cmp_seed, "Seed for measured runs");
    sub_compare->add_option("--out", cmp_out, "Write CSV to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_schedule->parsed())
            return cmd_schedule(sched_k, sched_format, sched_digits, sched_out);
        if (sub_cert->parsed()) return cmd_cert(cert_k, cert_format, cert_out);
        if (sub_verify->parsed())
            return cmd_verify(verify_kmax, verify_report, env_or(verify_bits, 4096),
                              verify_fault);
        if (sub_run->parsed())
            return cmd_run(run_fn, run_dim, run_seed, run_k, run_method, run_out);
        if (sub_audit->parsed())
            return cmd_audit(audit_fn, audit_dim, audit_seed, audit_k, audit_method);
        if (sub_compare->parsed())
            return cmd_compare(cmp_kmin, cmp_kmax, env_or(cmp_bits, 256), cmp_measured, cmp_fn,
                               cmp_dim, cmp_seed, cmp_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
