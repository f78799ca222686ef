#pragma once

#include <optional>

#include "hypercal/calibration.hpp"

namespace hypercal {

// Lie algebra given by structure constants [x_i, x_j] = sum_k c^k_ij x_k
// (stored for i < j only), with optional quaternionic structure and metric.
// The Chevalley-Eilenberg differential on invariant forms lives here.
struct LieModel {
    FramePtr frame;
    // (i,j) with i<j  ->  sparse list of (k, c)
    std::map<std::pair<int, int>, std::map<int, GaussianRational>> brackets;
    std::optional<QuaternionicStructure> structure;
    std::optional<HyperhermitianMetric> metric;
    bool nilpotent = false;        // computed, not trusted
    bool lattice_admissible = false; // informational

    GaussianRational c(int i, int j, int k) const;
    // Bracket of complexified vectors, bilinear extension.
    Poly bracket(const Poly& x, const Poly& y) const;
};

// nullopt when Jacobi holds; otherwise a witness triple (i,j,k).
std::optional<std::array<int, 3>> jacobi_witness(const LieModel& m);

// Lower central series dims g = g_1 >= [g,g] = g_2 >= ...; stops when stable.
std::vector<int> lower_central_series(const LieModel& m);
bool is_nilpotent(const LieModel& m);

// Finalizes a model: checks Jacobi, computes the nilpotency flag.
LieModel make_model(FramePtr frame,
                    std::map<std::pair<int, int>, std::map<int, GaussianRational>> brackets);

// Chevalley-Eilenberg differential; on 1-forms (d a)(x,y) = -a([x,y]),
// extended as an antiderivation. d^2 = 0 is verified at construction.
class CEOperator {
  public:
    explicit CEOperator(const LieModel& m);

    Form d(const Form& a) const;
    // Matrix of d: Lambda^k -> Lambda^{k+1} in mask order (for rank counts).
    Matrix matrix(int k) const;
    const LieModel& model() const { return *model_; }

  private:
    const LieModel* model_;
    std::vector<Form> d_of_coframe_; // d e^m, one per frame index
};

struct NijenhuisReport {
    bool zero = false;
    int witness_i = -1, witness_j = -1;
    Poly value; // N(x_i, x_j) for the witness pair
};

// N(x,y) = [x,y] + L[Lx,y] + L[x,Ly] - [Lx,Ly]; zero iff integrable.
NijenhuisReport nijenhuis(const LieModel& m, const Endo& L);

struct HktReport {
    bool hkt = false;              // del Omega_I = 0
    bool hyperkahler = false;      // d Omega_I = 0
    std::size_t del_omega_terms = 0; // nonzero coefficients of (3,0) part
    std::size_t dplus_omega_terms = 0;
    bool criteria_agree = false;   // del Omega_I = 0  <=>  d_+ omega_I = 0
};

HktReport hkt_test(const LieModel& m);
HktReport hkt_test(const LieModel& m, const HyperhermitianMetric& g);
bool hyperkahler_test(const LieModel& m);

// Invariant-cohomology Betti number in degree k, rank computation over Q.
long ce_cohomology(const LieModel& m, int k);

// ---- builtin catalog -------------------------------------------------------

// Abelian dim-4n model with the standard flat structure and identity metric.
LieModel builtin_flat(int n);

} // namespace hypercal
