#pragma once

#include <memory>

#include "d4ext/bigarith/enclosure.hpp"

namespace d4ext {

// Tiny expression tree over integers with +, -, *, /, sqrt, log.
// enclose() evaluates it to a certified interval of relative width
// <= 2^(1-precision_bits), escalating working precision as needed.
class Expr {
  public:
    static Expr integer(Int v) { return Expr(std::make_shared<Node>(Node{Kind::Leaf, std::move(v), {}, {}})); }

    friend Expr operator+(const Expr& a, const Expr& b) { return combine(Kind::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return combine(Kind::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return combine(Kind::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return combine(Kind::Div, a, b); }

    Expr sqrt() const { return Expr(std::make_shared<Node>(Node{Kind::Sqrt, 0, node_, nullptr})); }
    Expr log() const { return Expr(std::make_shared<Node>(Node{Kind::Log, 0, node_, nullptr})); }

    Enclosure eval(long prec) const { return eval(*node_, prec); }

  private:
    enum class Kind { Leaf, Add, Sub, Mul, Div, Sqrt, Log };

    struct Node {
        Kind kind;
        Int value;
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Expr combine(Kind k, const Expr& a, const Expr& b) {
        return Expr(std::make_shared<Node>(Node{k, 0, a.node_, b.node_}));
    }

    static Enclosure eval(const Node& n, long prec) {
        switch (n.kind) {
            case Kind::Leaf: return Enclosure::from_int(n.value, prec);
            case Kind::Add: return eval(*n.a, prec) + eval(*n.b, prec);
            case Kind::Sub: return eval(*n.a, prec) - eval(*n.b, prec);
            case Kind::Mul: return eval(*n.a, prec) * eval(*n.b, prec);
            case Kind::Div: return eval(*n.a, prec) / eval(*n.b, prec);
            case Kind::Sqrt: {
                Enclosure x = eval(*n.a, prec);
                if (x.sign_hi() < 0) throw std::domain_error("enclose: sqrt of negative value");
                return x.sqrt();
            }
            case Kind::Log: {
                Enclosure x = eval(*n.a, prec);
                if (x.sign_hi() <= 0) throw std::domain_error("enclose: log of nonpositive value");
                return x.log();
            }
        }
        throw std::logic_error("unreachable");
    }

    std::shared_ptr<const Node> node_;
};

inline Enclosure enclose(const Expr& e, long precision_bits) {
    return with_escalation(precision_bits + 16, [&](long prec) {
        Enclosure v = e.eval(prec);
        Rat w = v.width();
        Rat mag = std::max({Rat(abs(v.lo_rat())), Rat(abs(v.hi_rat())), Rat(1)});
        Rat target = mag;
        // width <= 2^(1 - precision_bits) * max(1, |value|)
        if (precision_bits >= 1) target /= (Int(1) << (precision_bits - 1));
        else target *= 2;
        if (w > target) throw Undecided("enclose: interval wider than requested tolerance");
        return v;
    });
}

} // namespace d4ext
