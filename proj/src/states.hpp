#pragma once

#include <complex>
#include <vector>

namespace bqpe {

// Two-mode pure state with exactly n photons: coefficients a_l of the
// basis |l, n-l>, l = 0..n, with unit total weight.
struct FockSuperposition {
  int n = 0;
  std::vector<std::complex<double>> coeffs;
};

// Equal superposition of |n,0> and |0,n>; n >= 1.
FockSuperposition noon(int n);

// Fock state |n,0> through a beam splitter of transmissivity tau:
// coefficients sqrt(C(n,l) tau^l (1-tau)^(n-l)).
FockSuperposition beam_splitter_state(int n, double tau);

// Validates size and normalization (1e-10) without altering the values.
FockSuperposition state_from_coefficients(int n,
                                          std::vector<std::complex<double>> coeffs);

// a_l -> a_l exp(i (2l - n) phi): upper mode advances by phi, lower by -phi.
FockSuperposition apply_phase(const FockSuperposition& s, double phi);

// Rotates the global phase so the first coefficient of non-negligible
// magnitude is real and positive.
FockSuperposition canonical_global_phase(FockSuperposition s);

double norm_sq(const FockSuperposition& s);

}  // namespace bqpe
