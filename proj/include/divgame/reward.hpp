#pragma once

#include <cmath>
#include <string>

#include "divgame/errors.hpp"

namespace divgame {

// Running-reward function f on the surplus.  Closed family of four shapes so
// that the Lipschitz budget is known by construction: the discount rate must
// strictly exceed lipschitz_bound() for the model to be well posed.
//
// All four shapes satisfy f(0) = 0, f >= 0, f non-decreasing.
class RewardFunction {
  public:
    enum class Kind { Zero, Linear, Capped, Saturating };

    static RewardFunction zero() { return RewardFunction(Kind::Zero, 0.0, 0.0, 0.0); }

    // f(x) = a * x
    static RewardFunction linear(double a) {
        require(a >= 0.0, "linear reward needs a >= 0");
        return RewardFunction(Kind::Linear, a, 0.0, a);
    }

    // f(x) = a * min(x, cap)
    static RewardFunction capped(double a, double cap) {
        require(a >= 0.0, "capped reward needs a >= 0");
        require(cap > 0.0, "capped reward needs cap > 0");
        return RewardFunction(Kind::Capped, a, cap, a);
    }

    // f(x) = (a/decay) * (1 - e^{-decay x})
    static RewardFunction saturating(double a, double decay) {
        require(a >= 0.0, "saturating reward needs a >= 0");
        require(decay > 0.0, "saturating reward needs decay > 0");
        return RewardFunction(Kind::Saturating, a, decay, a);
    }

    double operator()(double x) const {
        if (x < 0.0) throw ValidationError("reward evaluated at negative surplus");
        switch (kind_) {
            case Kind::Zero: return 0.0;
            case Kind::Linear: return a_ * x;
            case Kind::Capped: return a_ * std::min(x, b_);
            case Kind::Saturating: return a_ / b_ * (1.0 - std::exp(-b_ * x));
        }
        return 0.0;  // unreachable
    }

    Kind kind() const { return kind_; }
    double lipschitz_bound() const { return lips_; }

    // Shape parameters; meaning depends on kind (b is the cap level for
    // Capped and the decay rate for Saturating).
    double a() const { return a_; }
    double b() const { return b_; }

    std::string describe() const {
        switch (kind_) {
            case Kind::Zero: return "zero";
            case Kind::Linear: return "linear(" + std::to_string(a_) + ")";
            case Kind::Capped: return "capped(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
            case Kind::Saturating: return "saturating(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
        }
        return "?";
    }

  private:
    RewardFunction(Kind kind, double a, double b, double lips)
        : kind_(kind), a_(a), b_(b), lips_(lips) {}

    static void require(bool ok, const char* msg) {
        if (!ok) throw ValidationError(msg);
    }

    Kind kind_;
    double a_;
    double b_;
    double lips_;
};

}  // namespace divgame
