#pragma once

#include <functional>
#include <string>

#include "reslab/graph.hpp"

namespace reslab {

/// Two algebraically equivalent evaluation paths for the secular determinant:
/// `determinant` assembles det[(U-I)C1(k) + ik(U+I)C2(k)] from the sin/cos
/// transfer blocks; `exp_polynomial` assembles the same determinant organised
/// by the exponentials e^{+-ikl_j}.  Zero sets coincide.
enum class SecularForm { determinant, exp_polynomial };

/// Entire function of k whose zeros (with multiplicity) are the resonances of
/// the graph.  Returned split as unit phase + log magnitude so that values
/// with |Im k| * V far beyond overflow stay usable.
ScaledComplex secular_value(const FlowerForm& flower, Complex k,
                            SecularForm form = SecularForm::determinant);

/// Immutable evaluatable wrapper; safe to share across threads.
class SecularFunction {
  public:
    explicit SecularFunction(FlowerForm flower, SecularForm form = SecularForm::determinant)
        : flower_(std::move(flower)), form_(form) {}

    ScaledComplex operator()(Complex k) const { return secular_value(flower_, k, form_); }
    const FlowerForm& flower() const { return flower_; }
    SecularForm form() const { return form_; }

  private:
    FlowerForm flower_;
    SecularForm form_;
};

/// Coefficients of e^{+ikV} (sign=+1, senior) and e^{-ikV} (sign=-1, junior)
/// in the exponential-polynomial expansion, as evaluators
/// k -> (i/2)^N det[(U(k)-I) +- k (U(k)+I)] built on the effective coupling.
/// Defined up to a k-independent nonzero constant; only zeros matter.
Complex extremal_coefficient(const FlowerForm& flower, Complex k, int sign);

struct AsymptoticsClass {
    enum Kind { Weyl, NonWeyl } kind = Weyl;
    std::string witness;  // vertex and eigenvalue branch for NonWeyl
};

/// Weyl vs non-Weyl resonance-counting asymptotics.  Numeric test: some
/// per-vertex effective matrix has eigenvalue (1-k)/(1+k) or (1+k)/(1-k) at
/// all 12 sample points; for permutation-symmetric couplings the structural
/// balanced-vertex criterion must agree (disagreement throws NumericError).
AsymptoticsClass classify_asymptotics(const FlowerForm& flower);

}  // namespace reslab
