#pragma once

#include <optional>
#include <string>
#include <vector>

#include "masersim/ode.hpp"

namespace masersim {

/// Dimensional two-level-system parameters. delta is the photon loss rate in
/// w21 units, alpha the spontaneous/stimulated coefficient ratio u21/w21.
struct PhysicalParams {
    double N_total = 1e12; // n1 + n2
    double mu0 = 1e6;      // initial inversion n2 - n1
    double delta = 0.0;
    double alpha = 1.0;
    double I0 = 0.0;          // pump strength, (nu - u21) n1 = mu0^2 I0
    double Gamma = 2.0;       // inversion drive
    double Nk0 = 3e4;         // initial photon count (dimensional variants)
    double spontaneous_source_factor = 0.5;
};

struct NormalizedParams {
    double N0 = 1.0;    // N_total / mu0^2
    double theta = 0.0; // delta / mu0
    double I0 = 0.0;
    double Gamma_tilde = 0.0; // Gamma - 2
    double spontaneous_source_factor = 0.5;
    double time_scale = 1.0;  // mu0, converts T = mu0 * tau
};

enum class Variant {
    TradDim,  // dimensional traditional model, state (n2, mu, N_k)
    SepDim,   // dimensional separated-photon model, state (n2, mu, N_inc, N_c)
    TradNorm, // normalized traditional model, state (M1, N1)
    SepNorm,  // normalized separated-photon model, state (M, N_inc, N_c)
    PulsNorm, // pumped pulsating model, state (M, N_inc, N_c)
};

const char* variant_name(Variant v);            // e.g. "sep-norm"
Variant variant_from_name(const std::string&);  // throws UnknownVariant
bool variant_is_normalized(Variant v);
std::vector<std::string> variant_labels(Variant v);

NormalizedParams normalize(const PhysicalParams& p);

VectorField vector_field(Variant v, const NormalizedParams& np);
VectorField vector_field(Variant v, const PhysicalParams& p);

/// Initial state per the models' default: M = M1 = 1, normalized photon
/// components 3e4/mu0; dimensional variants n2 = (N + mu0)/2, photons Nk0.
/// PULS-NORM instead starts at its fixed point with a 10% kick on M.
std::vector<double> default_initial_state(Variant v, const PhysicalParams& p);

// Closed forms ---------------------------------------------------------------

double threshold_mu_th1(const PhysicalParams& p); // delta / w21 (w21 = 1)
double threshold_mu_th2(double N_total);          // 2 sqrt(N)
double stationary_inversion(double mu0, double N_total);
double stationary_photons(double mu0, double N_total);
double einstein_alpha(double omega_rad_per_s); // 2 w^2 / (pi c^3), CGS
double gamma_from_convection(double v, double L);
double loss_from_radius(double R, double c);

struct PulsatingFixedPoint {
    double M;
    double N_inc;
    double N_c;
};
PulsatingFixedPoint pulsating_fixed_point(const NormalizedParams& np);

struct RepetitionRate {
    double omega;  // sqrt(theta * Gamma_tilde), angular frequency
    double period; // 2 pi / omega (inf when omega == 0)
    bool valid;    // Gamma_tilde > I0 / theta
};
RepetitionRate predicted_repetition_rate(const NormalizedParams& np);

double predicted_outflow(const NormalizedParams& np); // (Gamma_tilde*theta + N0)/2

// Conserved combinations -----------------------------------------------------

/// Exact linear invariants of each variant, used as integration oracles.
/// Throws NoConservedQuantity when the variant has none under the given
/// parameters (theta > 0 for normalized variants, spontaneous factor 1.0 for
/// SEP-NORM, PULS-NORM always).
struct ConservedQuantity {
    std::string description;
    std::function<double(const std::vector<double>&)> eval;
};
std::vector<ConservedQuantity> conserved_quantities(Variant v, const NormalizedParams& np);
std::vector<ConservedQuantity> conserved_quantities_dim(Variant v, const PhysicalParams& p);

} // namespace masersim
