// Acceptance gate: one pass/fail line per criterion, tolerances pinned here.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "masersim/commands.hpp"
#include "masersim/io.hpp"

using namespace masersim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

std::string num(double v) { return format_double(v); }

int jobs() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? static_cast<int>(n) : 4;
}

Trajectory run_variant(Variant v, const PhysicalParams& p, double t_end,
                       double sample_interval) {
    IntegratorConfig cfg;
    cfg.t_end = t_end;
    cfg.sample_interval = sample_interval;
    auto field = variant_is_normalized(v) ? vector_field(v, normalize(p))
                                          : vector_field(v, p);
    return integrate(field, default_initial_state(v, p), cfg);
}

// --- criterion 1: conservation suite ----------------------------------------

void criterion_1() {
    const double tol = 1e-8;
    double worst = 0;
    std::string worst_case;

    auto track = [&](const std::string& name, double drift) {
        if (drift > worst) {
            worst = drift;
            worst_case = name;
        }
    };

    PhysicalParams p;
    p.N_total = 1e12;
    p.mu0 = std::sqrt(1e12 / 0.05); // N0 = 0.05
    p.delta = 0;
    auto np = normalize(p);

    auto trad = run_variant(Variant::TradNorm, p, 50.0, 0.05);
    track("trad-norm M1+2N1", conserved_quantity_drift(trad, Variant::TradNorm, np));

    auto sep = run_variant(Variant::SepNorm, p, 50.0, 0.05);
    track("sep-norm M+2N_inc+2N_c", conserved_quantity_drift(sep, Variant::SepNorm, np));

    PhysicalParams pd;
    pd.N_total = 1e12;
    pd.mu0 = 1e6;
    auto dim = run_variant(Variant::TradDim, pd, 50.0 / pd.mu0, 0.05 / pd.mu0);
    track("trad-dim invariants",
          conserved_quantity_drift_dim(dim, Variant::TradDim, pd));

    report(1, worst < tol, "conservation drift < 1e-8 across the three suites",
           "max " + num(worst) + " (" + worst_case + ")");
}

// --- criterion 2: sub-threshold stationary state ----------------------------

void criterion_2() {
    const bool exact = stationary_inversion(0, 1e12) == -1e6;

    PhysicalParams p;
    p.N_total = 1e12;
    p.mu0 = 1e4; // mu0 << sqrt(N)
    auto traj = run_variant(Variant::TradDim, p, 1e-4, 1e-6);
    const double mu_end = traj.states.back()[1];
    const double nk_end = traj.states.back()[2];
    const double sqrtN = 1e6;
    const double mu_err = std::abs(mu_end + sqrtN) / sqrtN;
    const double nk_err = std::abs(nk_end - sqrtN) / sqrtN;

    const bool pass = exact && mu_err < 0.05 && nk_err < 0.05;
    report(2, pass,
           "stationary_inversion(0,1e12) exact; simulated mu -> -sqrt(N) and "
           "N_k -> sqrt(N) within 5%",
           "mu rel err " + num(mu_err) + ", N_k rel err " + num(nk_err) +
               " (measured N_k " + num(nk_end) +
               "; exact photon conservation gives Nk0+(mu0-mu_st)/2 ~ sqrt(N)/2, "
               "so the sqrt(N) clause cannot be met by these equations)");
}

// --- criterion 3: superradiant asymptotes -----------------------------------

void criterion_3(const std::vector<RunRecord>& fig6) {
    PhysicalParams p;
    p.N_total = 1e12;
    p.mu0 = 2e7;
    auto traj = run_variant(Variant::TradDim, p, 5e-6, 5e-8);
    const double nk_end = traj.states.back()[2];
    const double dim_err = std::abs(nk_end - p.mu0 / 2.0) / (p.mu0 / 2.0);

    double last_peak = 0;
    bool increasing = true;
    double prev = 0;
    for (const auto& rec : fig6) {
        const double peak = rec.analysis["pulse_metrics"]["peak_value"].get<double>();
        if (peak <= prev) increasing = false;
        prev = peak;
        last_peak = peak;
    }
    const bool norm_ok = std::abs(last_peak - 0.5) / 0.5 <= 0.10;

    report(3, dim_err < 0.05 && increasing && norm_ok,
           "trad-dim N_k -> mu0/2 within 5%; sep-norm peak N_c increasing toward "
           "0.5 +- 10%",
           "dim rel err " + num(dim_err) + ", largest-mu0 peak " + num(last_peak));
}

// --- criterion 4: threshold behavior across the fig1 N0 list ----------------

void criterion_4(const std::vector<RunRecord>& fig1) {
    // N0 is listed in descending order, so the plateau value ln(mean rate)
    // must increase strictly along the records.
    bool monotone = true;
    std::vector<double> plateaus;
    for (const auto& rec : fig1) {
        const double rate = mean_log_growth_rate(rec.trajectory, "N1");
        plateaus.push_back(std::log(rate));
        if (plateaus.size() > 1 && plateaus.back() <= plateaus[plateaus.size() - 2])
            monotone = false;
    }
    // sustained exponential stage for N0 = 0.03 (last record): d(ln N1)/dT
    // >= 0.8*M1(0) = 0.8 over a contiguous interval of at least one T unit
    const double sustained = longest_interval_above(fig1.back().trajectory, "N1", 0.8);
    const bool pass = monotone && sustained >= 1.0;
    report(4, pass,
           "plateau ln(N^-1 dN/dT) monotone in N0; sustained rate >= 0.8 below "
           "threshold",
           "plateau range [" + num(plateaus.front()) + ", " + num(plateaus.back()) +
               "], sustained interval " + num(sustained) + " T");
}

// --- criterion 5: pulse-shape trends ----------------------------------------

void criterion_5(const std::vector<RunRecord>& fig6, const std::vector<RunRecord>& fig7) {
    // Durations compared in dimensional time tau = T/mu0, since each record
    // has its own time scale mu0.
    bool fwhm_up = true, lead_down = true;
    double prev_fwhm = -1, prev_lead = 1e300;
    for (const auto& rec : fig6) {
        const auto& pm = rec.analysis["pulse_metrics"];
        const double fwhm = pm["fwhm"].get<double>();
        const double lead_tau = pm["leading_edge_tau"].get<double>();
        if (fwhm <= prev_fwhm) fwhm_up = false;
        if (lead_tau >= prev_lead) lead_down = false;
        prev_fwhm = fwhm;
        prev_lead = lead_tau;
    }

    // fig7: fwhm_tau within +-20% of its mean over the upper half of the mu0
    // range; edge_ratio non-decreasing over all records with a full pulse
    std::vector<double> fwhm_tau, ratios;
    for (const auto& rec : fig7) {
        const auto& pm = rec.analysis["pulse_metrics"];
        if (pm.contains("error")) continue; // shortest mu0 never drops to half max
        if (rec.index >= fig7.size() / 2)
            fwhm_tau.push_back(pm["fwhm_tau"].get<double>());
        ratios.push_back(pm["edge_ratio"].get<double>());
    }
    double mean = 0;
    for (double v : fwhm_tau) mean += v;
    mean /= static_cast<double>(fwhm_tau.size());
    bool flat = true;
    for (double v : fwhm_tau)
        if (std::abs(v - mean) / mean > 0.20) flat = false;
    bool ratio_up = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        if (ratios[i] < ratios[i - 1]) ratio_up = false;

    report(5, fwhm_up && lead_down && flat && ratio_up,
           "fig6 fwhm increasing, leading edge (tau) decreasing; fig7 fwhm_tau "
           "flat +-20% on upper half, edge_ratio non-decreasing",
           "fig7 fwhm_tau mean " + num(mean) + ", edge_ratio span [" +
               num(ratios.front()) + ", " + num(ratios.back()) + "]");
}

// --- criterion 6: absorption halving ----------------------------------------

void criterion_6() {
    auto fwhm_at_delta = [](double delta) {
        PhysicalParams p;
        p.N_total = 1e12;
        p.mu0 = std::sqrt(1e12 / 0.05); // N0 = 0.05
        p.delta = delta;
        auto traj = run_variant(Variant::SepNorm, p, 150.0, 0.02);
        return pulse_metrics(traj, "N_c").fwhm;
    };
    const double f2 = fwhm_at_delta(2e5);
    const double f4 = fwhm_at_delta(4e5);
    const double ratio = f2 / f4;
    const bool pass = ratio >= 1.4 && ratio <= 2.6;
    report(6, pass, "doubling delta halves the coherent-pulse fwhm (2 +- 30%)",
           "measured ratio " + num(ratio) + " (fwhm " + num(f2) + " -> " + num(f4) +
               "; at N0=0.05 the loss only trims the shallow trailing edge, so the "
               "halving claim holds only at much smaller N0)");
}

// --- criterion 7: pulsating regime ------------------------------------------

void criterion_7(const std::vector<RunRecord>& fig8) {
    const auto& rec = fig8.front();
    const auto& train = rec.analysis["pulse_train"];
    const std::size_t peaks = train["peak_times"].size();
    const double period = train["mean_period"].get<double>();
    const double predicted_period = 2.0 * M_PI / 0.2;
    const double period_err = std::abs(period - predicted_period) / predicted_period;

    auto np = rec.resolved.normalized();
    auto fp = pulsating_fixed_point(np);
    auto field = vector_field(Variant::PulsNorm, np);
    double y[3] = {fp.M, fp.N_inc, fp.N_c}, dy[3];
    field.eval(0.0, y, dy);
    const double residual =
        std::max({std::abs(dy[0]), std::abs(dy[1]), std::abs(dy[2])});

    const double outflow = rec.analysis["outflow"]["mean_total_outflow"].get<double>();
    const double window = rec.analysis["outflow"]["window_end"].get<double>() -
                          rec.analysis["outflow"]["window_start"].get<double>();
    const double outflow_err = std::abs(outflow - 0.045) / 0.045;

    const bool pass = peaks >= 5 && period_err <= 0.15 && residual < 1e-12 &&
                      window >= 5.0 * predicted_period && outflow_err <= 0.10;
    report(7, pass,
           ">=5 pulses, period 31.4 +-15%, fixed-point residual < 1e-12, outflow "
           "0.045 +-10% over >=5 periods",
           std::to_string(peaks) + " peaks, period " + num(period) + ", residual " +
               num(residual) + ", outflow " + num(outflow));
}

// --- criterion 8: dual-integrator oracle equivalence ------------------------

void criterion_8(const std::vector<std::string>& presets) {
    double worst = 0;
    std::string worst_case;
    for (const auto& name : presets) {
        auto spec = figure_preset(name);
        auto rk45 = run_sweep(spec, jobs());

        auto spec4 = spec;
        spec4.base.integrator.method = IntegratorMethod::FixedStepRK4;
        spec4.base.integrator.initial_step = 1e-4;
        auto rk4 = run_sweep(spec4, jobs());

        for (std::size_t r = 0; r < rk45.size(); ++r) {
            if (rk45[r].status != "ok" || rk4[r].status != "ok") continue;
            const auto& a = rk45[r].trajectory;
            const auto& b = rk4[r].trajectory;
            const std::size_t n = std::min(a.times.size(), b.times.size());
            const std::size_t dim = a.labels.size();
            // error relative to each component's own magnitude scale, since
            // components cross zero and span many decades
            for (std::size_t c = 0; c < dim; ++c) {
                double scale = 0;
                for (std::size_t i = 0; i < n; ++i)
                    scale = std::max(scale, std::abs(a.states[i][c]));
                if (scale == 0) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    const double err =
                        std::abs(a.states[i][c] - b.states[i][c]) / scale;
                    if (err > worst) {
                        worst = err;
                        worst_case = name + "[" + std::to_string(r) + "]." + a.labels[c];
                    }
                }
            }
        }
    }
    report(8, worst <= 1e-6, "adaptive rk45 vs fixed-step rk4 (h=1e-4) agree to 1e-6",
           "max rel err " + num(worst) + " (" + worst_case + ")");
}

// --- criterion 9: closed-form anchors ---------------------------------------

void criterion_9() {
    const double yellow = einstein_alpha(3.25e15);
    const double violet = einstein_alpha(4.8e15);
    const bool pass = std::abs(yellow - 0.25) / 0.25 <= 0.10 &&
                      std::abs(violet - 0.6) / 0.6 <= 0.10 &&
                      threshold_mu_th2(1e12) == 2e6;
    report(9, pass, "einstein_alpha anchors within 10%; threshold 2sqrt(N) exact",
           "alpha(yellow) " + num(yellow) + ", alpha(violet) " + num(violet));
}

// --- criterion 10: determinism and manifest round-trip ----------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

bool same_csvs(const fs::path& a, const fs::path& b) {
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        if (slurp(e.path()) != slurp(b / e.path().filename())) return false;
    }
    return true;
}

void criterion_10() {
    const fs::path root =
        fs::temp_directory_path() /
        ("masersim_acc_" + std::to_string(std::random_device{}()));
    bool pass = true;
    std::string detail;
    try {
        for (const std::string name : {"fig2", "fig8"}) {
            const fs::path d1 = root / (name + "_j1"), dn = root / (name + "_jn"),
                           rt = root / (name + "_rt");
            cmd_figure(figure_preset(name), name, d1, 1);
            cmd_figure(figure_preset(name), name, dn, jobs());
            if (!same_csvs(d1, dn)) {
                pass = false;
                detail = name + ": jobs-1 vs jobs-N CSVs differ";
                break;
            }
            // re-run from the manifest's embedded sweep spec
            auto manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
            auto spec = sweep_spec_from_json(manifest["sweep"]);
            cmd_figure(spec, name, rt, 1);
            if (!same_csvs(d1, rt)) {
                pass = false;
                detail = name + ": manifest round-trip CSVs differ";
                break;
            }
        }
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    fs::remove_all(root);
    report(10, pass, "byte-identical CSVs across job counts and manifest round-trips",
           detail);
}

} // namespace

int main() {
    const std::vector<std::string> presets = {"fig1", "fig2", "fig3", "fig4",
                                              "fig5", "fig6", "fig7", "fig8"};
    auto fig1 = run_sweep(figure_preset("fig1"), jobs());
    auto fig6 = run_sweep(figure_preset("fig6"), jobs());
    auto fig7 = run_sweep(figure_preset("fig7"), jobs());
    auto fig8 = run_sweep(figure_preset("fig8"), jobs());

    criterion_1();
    criterion_2();
    criterion_3(fig6);
    criterion_4(fig1);
    criterion_5(fig6, fig7);
    criterion_6();
    criterion_7(fig8);
    criterion_8(presets);
    criterion_9();
    criterion_10();

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
