#include "masersim/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace masersim {

namespace {
constexpr double kSpeedOfLightCgs = 2.998e10; // cm/s
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::TradDim: return "trad-dim";
        case Variant::SepDim: return "sep-dim";
        case Variant::TradNorm: return "trad-norm";
        case Variant::SepNorm: return "sep-norm";
        case Variant::PulsNorm: return "puls-norm";
    }
    raise(ErrorCode::UnknownVariant, "bad variant enum value");
}

Variant variant_from_name(const std::string& name) {
    if (name == "trad-dim") return Variant::TradDim;
    if (name == "sep-dim") return Variant::SepDim;
    if (name == "trad-norm") return Variant::TradNorm;
    if (name == "sep-norm") return Variant::SepNorm;
    if (name == "puls-norm") return Variant::PulsNorm;
    raise(ErrorCode::UnknownVariant, "unknown model variant: " + name);
}

bool variant_is_normalized(Variant v) {
    return v == Variant::TradNorm || v == Variant::SepNorm || v == Variant::PulsNorm;
}

std::vector<std::string> variant_labels(Variant v) {
    switch (v) {
        case Variant::TradDim: return {"n2", "mu", "N_k"};
        case Variant::SepDim: return {"n2", "mu", "N_inc", "N_c"};
        case Variant::TradNorm: return {"M1", "N1"};
        case Variant::SepNorm: return {"M", "N_inc", "N_c"};
        case Variant::PulsNorm: return {"M", "N_inc", "N_c"};
    }
    raise(ErrorCode::UnknownVariant, "bad variant enum value");
}

NormalizedParams normalize(const PhysicalParams& p) {
    if (p.mu0 == 0.0)
        raise(ErrorCode::ZeroInversionScale, "mu0 = 0: normalization scale undefined");
    if (!(p.mu0 > 0))
        raise(ErrorCode::InvalidArgument, "mu0 must be positive for normalization");
    NormalizedParams np;
    np.N0 = p.N_total / (p.mu0 * p.mu0);
    np.theta = p.delta / p.mu0;
    np.I0 = p.I0;
    np.Gamma_tilde = p.Gamma - 2.0;
    np.spontaneous_source_factor = p.spontaneous_source_factor;
    np.time_scale = p.mu0;
    return np;
}

VectorField vector_field(Variant v, const NormalizedParams& np) {
    VectorField f;
    f.component_labels = variant_labels(v);
    f.dimension = static_cast<int>(f.component_labels.size());
    const double N0 = np.N0, theta = np.theta, I0 = np.I0, Gt = np.Gamma_tilde;
    const double sf = np.spontaneous_source_factor;
    switch (v) {
        case Variant::TradNorm:
            f.eval = [N0, theta](double, const double* y, double* d) {
                const double M1 = y[0], N1 = y[1];
                d[0] = -N0 - 2.0 * M1 * N1;
                d[1] = N0 / 2.0 + M1 * N1 - theta * N1;
            };
            return f;
        case Variant::SepNorm:
            f.eval = [N0, theta, sf](double, const double* y, double* d) {
                const double M = y[0], Ninc = y[1], Nc = y[2];
                d[0] = -N0 - 2.0 * M * Nc;
                d[1] = sf * N0 - theta * Ninc;
                d[2] = (M - theta) * Nc;
            };
            return f;
        case Variant::PulsNorm:
            f.eval = [N0, theta, I0, Gt](double, const double* y, double* d) {
                const double M = y[0], Ninc = y[1], Nc = y[2];
                d[0] = Gt * M - 2.0 * M * Nc + 2.0 * I0;
                d[1] = N0 / 2.0 - theta * Ninc;
                d[2] = (M - theta) * Nc;
            };
            return f;
        default:
            raise(ErrorCode::UnknownVariant,
                  std::string(variant_name(v)) + " takes physical, not normalized, parameters");
    }
}

VectorField vector_field(Variant v, const PhysicalParams& p) {
    VectorField f;
    f.component_labels = variant_labels(v);
    f.dimension = static_cast<int>(f.component_labels.size());
    const double alpha = p.alpha;
    switch (v) {
        case Variant::TradDim:
            f.eval = [alpha](double, const double* y, double* d) {
                const double n2 = y[0], mu = y[1], Nk = y[2];
                d[0] = -alpha * n2 - mu * Nk;
                d[1] = -2.0 * alpha * n2 - 2.0 * mu * Nk;
                d[2] = alpha * n2 + mu * Nk;
            };
            return f;
        case Variant::SepDim:
            // u21 = w21 = w12; the coherent source is mu * N_c.
            f.eval = [](double, const double* y, double* d) {
                const double n2 = y[0], mu = y[1], Nc = y[3];
                d[0] = -n2 - mu * Nc;
                d[1] = -2.0 * n2 - 2.0 * mu * Nc;
                d[2] = n2;
                d[3] = mu * Nc;
            };
            return f;
        default:
            return vector_field(v, normalize(p));
    }
}

std::vector<double> default_initial_state(Variant v, const PhysicalParams& p) {
    if (!(p.mu0 > 0))
        raise(ErrorCode::InvalidArgument, "mu0 must be positive for the default initial state");
    const double photons_norm = 3e4 / p.mu0;
    switch (v) {
        case Variant::TradDim:
            return {(p.N_total + p.mu0) / 2.0, p.mu0, p.Nk0};
        case Variant::SepDim:
            return {(p.N_total + p.mu0) / 2.0, p.mu0, p.Nk0, p.Nk0};
        case Variant::TradNorm:
            return {1.0, photons_norm};
        case Variant::SepNorm:
            return {1.0, photons_norm, photons_norm};
        case Variant::PulsNorm: {
            // Fixed point with a 10% relative kick on M: excites the
            // relaxation oscillation reproducibly and keeps the orbit in the
            // near-linear regime where the sqrt(theta*Gamma_tilde) repetition
            // rate applies.
            PulsatingFixedPoint fp = pulsating_fixed_point(normalize(p));
            return {1.1 * fp.M, fp.N_inc, fp.N_c};
        }
    }
    raise(ErrorCode::UnknownVariant, "bad variant enum value");
}

double threshold_mu_th1(const PhysicalParams& p) { return p.delta; }

double threshold_mu_th2(double N_total) {
    if (!(N_total > 0))
        raise(ErrorCode::InvalidArgument, "N_total must be positive");
    return 2.0 * std::sqrt(N_total);
}

double stationary_inversion(double mu0, double N_total) {
    if (N_total < 0)
        raise(ErrorCode::InvalidArgument, "N_total must be non-negative");
    const double half = mu0 / 2.0;
    return half - std::sqrt(half * half + N_total);
}

double stationary_photons(double mu0, double N_total) {
    return (mu0 - stationary_inversion(mu0, N_total)) / 2.0;
}

double einstein_alpha(double omega) {
    if (omega < 0)
        raise(ErrorCode::InvalidArgument, "omega must be non-negative");
    const double c3 = kSpeedOfLightCgs * kSpeedOfLightCgs * kSpeedOfLightCgs;
    return 2.0 * omega * omega / (std::numbers::pi * c3);
}

double gamma_from_convection(double v, double L) {
    if (!(L > 0))
        raise(ErrorCode::NonPositiveLength, "convection length scale must be positive");
    if (v < 0)
        raise(ErrorCode::InvalidArgument, "convection speed must be non-negative");
    return v / L;
}

double loss_from_radius(double R, double c) {
    if (!(R > 0))
        raise(ErrorCode::NonPositiveRadius, "system radius must be positive");
    return c / R;
}

PulsatingFixedPoint pulsating_fixed_point(const NormalizedParams& np) {
    if (!(np.theta > 0))
        raise(ErrorCode::ZeroLoss, "theta = 0: the pulsating model has no finite fixed point");
    PulsatingFixedPoint fp;
    fp.M = np.theta;
    fp.N_inc = np.N0 / (2.0 * np.theta);
    fp.N_c = (np.Gamma_tilde * np.theta + 2.0 * np.I0) / (2.0 * np.theta);
    return fp;
}

RepetitionRate predicted_repetition_rate(const NormalizedParams& np) {
    if (!(np.theta > 0))
        raise(ErrorCode::ZeroLoss, "theta must be positive for the repetition-rate estimate");
    if (np.Gamma_tilde < 0)
        raise(ErrorCode::InvalidArgument, "Gamma_tilde must be non-negative");
    RepetitionRate r;
    r.omega = std::sqrt(np.theta * np.Gamma_tilde);
    r.period = r.omega > 0 ? 2.0 * std::numbers::pi / r.omega
                           : std::numeric_limits<double>::infinity();
    r.valid = np.Gamma_tilde > np.I0 / np.theta;
    return r;
}

double predicted_outflow(const NormalizedParams& np) {
    if (!(np.theta > 0))
        raise(ErrorCode::ZeroLoss, "theta must be positive for the outflow balance");
    if (np.I0 != 0.0)
        raise(ErrorCode::InvalidArgument, "outflow balance assumes I0 = 0 (nu = u21)");
    return (np.Gamma_tilde * np.theta + np.N0) / 2.0;
}

std::vector<ConservedQuantity> conserved_quantities(Variant v, const NormalizedParams& np) {
    switch (v) {
        case Variant::TradNorm:
            if (np.theta != 0.0)
                raise(ErrorCode::NoConservedQuantity,
                      "M1 + 2 N1 is conserved only in the lossless case (theta = 0)");
            return {{"M1 + 2*N1",
                     [](const std::vector<double>& y) { return y[0] + 2.0 * y[1]; }}};
        case Variant::SepNorm:
            if (np.theta != 0.0)
                raise(ErrorCode::NoConservedQuantity,
                      "M + 2*N_inc + 2*N_c is conserved only in the lossless case (theta = 0)");
            if (np.spontaneous_source_factor != 0.5)
                raise(ErrorCode::NoConservedQuantity,
                      "spontaneous source factor 1.0 breaks the conservation law "
                      "(d/dT of M + 2*N_inc + 2*N_c equals N0)");
            return {{"M + 2*N_inc + 2*N_c",
                     [](const std::vector<double>& y) { return y[0] + 2.0 * y[1] + 2.0 * y[2]; }}};
        case Variant::PulsNorm:
            raise(ErrorCode::NoConservedQuantity, "the pumped pulsating model is driven");
        default:
            raise(ErrorCode::InvalidArgument,
                  "dimensional variants use conserved_quantities_dim");
    }
}

std::vector<ConservedQuantity> conserved_quantities_dim(Variant v, const PhysicalParams&) {
    switch (v) {
        case Variant::TradDim:
            return {{"mu + 2*N_k",
                     [](const std::vector<double>& y) { return y[1] + 2.0 * y[2]; }},
                    {"n1 + n2",
                     [](const std::vector<double>& y) { return 2.0 * y[0] - y[1]; }}};
        case Variant::SepDim:
            return {{"mu + 2*N_inc + 2*N_c",
                     [](const std::vector<double>& y) {
                         return y[1] + 2.0 * y[2] + 2.0 * y[3];
                     }},
                    {"n1 + n2",
                     [](const std::vector<double>& y) { return 2.0 * y[0] - y[1]; }}};
        default:
            raise(ErrorCode::InvalidArgument, "normalized variants use conserved_quantities");
    }
}

} // namespace masersim
