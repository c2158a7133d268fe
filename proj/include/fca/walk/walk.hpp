#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fca/core/types.hpp"

namespace fca::walk {

// h1..h4 of the BCC Cayley graph; h1 + h2 + h3 + h4 = 0.
struct BccGenerators {
  std::array<Vec3, 4> h;
};

BccGenerators bcc_generators();

enum class Chirality { Plus, Minus };

// d I - i a_x sx (+/-) i a_y sy - i a_z sz with c_i = cos(k_i/sqrt3), s_i = sin(k_i/sqrt3).
ComplexMatrix weyl_matrix(Chirality chirality, const Vec3& k);

// [[n W, i m I], [i m I, n W^dagger]], n = sqrt(1 - m^2). Throws if |m| > 1.
ComplexMatrix dirac_matrix(const Vec3& k, double m, Chirality chirality = Chirality::Plus);

// diag(e^{-ik}, e^{ik}, e^{ik}, e^{-ik})
ComplexMatrix massless_1d_matrix(double k);

// Position-space form T (x) (|1><1| + |4><4|) + T^dagger (x) (|2><2| + |3><3|), T|x> = |x+1>,
// on an n-site ring; index = 4 x + a.
ComplexMatrix massless_1d_position(int n);

// Finite-support walk U = sum_h T_h (x) U_h.
struct WalkTerm {
  Vec3 h;
  ComplexMatrix u;
};
using WalkTerms = std::vector<WalkTerm>;

// Generators as written in the position-space definition of the walk.
WalkTerms weyl_terms_raw(Chirality chirality);
// Generators whose symbol equals weyl_matrix: U_h = (W_{R_x h})^T with W the raw ones.
WalkTerms weyl_terms(Chirality chirality);
WalkTerms dirac_terms(double m, Chirality chirality = Chirality::Plus);

// sum_h e^{-i k.h} U_h
ComplexMatrix walk_symbol(const WalkTerms& terms, const Vec3& k);

struct IsotropyElement {
  std::string name;
  Eigen::Matrix3d rotation;
  ComplexMatrix v;
};

struct IsotropyRep {
  std::vector<IsotropyElement> elements;
};

enum class DiracRepVariant {
  Covariant,    // i sigma_l (+) i sigma_l
  MinusSigma,   // -sigma_l (+) sigma_l
  MinusSigmaY,  // -sigma_l (+) sigma_l, with sigma_y in the second block for R(pi, z)
};

IsotropyRep weyl_isotropy();
IsotropyRep dirac_isotropy(DiracRepVariant variant);
// Same rotations, every V replaced by the identity of the given size.
IsotropyRep trivial_isotropy(int dim);

// max over l, h of ||U_{l h} - V_l U_h V_l^dagger||_max.
// Throws std::invalid_argument if some l h is not among the generators.
double isotropy_covariance_check(const WalkTerms& terms, const IsotropyRep& rep);

// max over l, l' of the distance of V_l V_l' from the phase orbit of V_{l l'}.
double projective_closure_defect(const IsotropyRep& rep);

struct WalkModel {
  std::string name;
  std::function<ComplexMatrix(const Vec3&)> symbol;
};

WalkModel weyl_model(Chirality chirality);
WalkModel dirac_model(double m, Chirality chirality = Chirality::Plus);
WalkModel massless_1d_model();  // uses k.x()

// Eigenphases of the unitary symbol, each in (-pi, pi], ascending.
std::vector<double> dispersion(const ComplexMatrix& u);
std::vector<double> dispersion(const WalkModel& walk, const Vec3& k);

// n^3 Cartesian grid over [-pi sqrt3 / 2, pi sqrt3 / 2]^3, clipped to the BCC Brillouin zone.
std::vector<Vec3> bz_grid(int n);
bool in_brillouin_zone(const Vec3& k);

struct DispersionRow {
  Vec3 k;
  int branch;
  double omega;
};

std::vector<DispersionRow> dispersion_sweep(const WalkModel& walk, int n);

}  // namespace fca::walk
