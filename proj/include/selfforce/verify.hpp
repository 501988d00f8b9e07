#pragma once

#include <iosfwd>

#include "selfforce/oracle.hpp"

namespace selfforce {

// One self-contained verification sweep: every closed-form quantity in the
// library is checked against an independent numerical oracle (Monte-Carlo
// sampling, adaptive quadrature, direct convolution) plus the internal
// consistency identities that tie the expressions together.
struct VerifyOptions {
  McConfig mc;
  // Multiplies the closed-form kernel I by (1 + perturb_kernel) inside the
  // checks that compare I itself.  Negative control: a perturbation of 1e-4
  // must make the sweep fail.  0 for honest verification.
  double perturb_kernel = 0.0;
};

struct VerifyResult {
  std::vector<OracleReport> reports;
  bool all_pass = true;
  int checks_failed = 0;

  void write_text(std::ostream& out) const;
  void write_csv(std::ostream& out) const;
};

VerifyResult run_verification(const SphereBody& body, const VerifyOptions& options);

}  // namespace selfforce
