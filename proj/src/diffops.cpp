#include "nbm/diffops.hpp"

#include <cmath>
#include <stdexcept>

namespace nbm {

namespace {

double endpoint(const TauPoint& pt, int i) {
    auto b = pt.E.finite_boundaries();
    if (i < 0 || i >= (int)b.size()) throw std::out_of_range("endpoint index");
    return b[i];
}

// central difference with Richardson extrapolation (halving steps)
FdValue central_richardson(const std::function<double(const TauPoint&)>& f, const TauPoint& at,
                           const Coordinate& dir, double h, int levels) {
    if (levels < 1) levels = 1;
    std::vector<std::vector<double>> T(levels);
    double hh = h;
    for (int i = 0; i < levels; ++i) {
        double up = f(displaced(at, dir, hh));
        double dn = f(displaced(at, dir, -hh));
        T[i].resize(i + 1);
        T[i][0] = (up - dn) / (2.0 * hh);
        double pow4 = 1.0;
        for (int j = 1; j <= i; ++j) {
            pow4 *= 4.0;
            T[i][j] = (pow4 * T[i][j - 1] - T[i - 1][j - 1]) / (pow4 - 1.0);
        }
        hh *= 0.5;
    }
    FdValue out;
    out.value = T[levels - 1][levels - 1];
    out.error = levels >= 2 ? std::abs(T[levels - 1][levels - 1] - T[levels - 1][levels - 2])
                            : 0.0;
    return out;
}

} // namespace

TauPoint displaced(const TauPoint& pt, const Coordinate& c, double h) {
    TauPoint out = pt;
    switch (c.kind) {
        case CoordKind::A:
            out.a.at(c.index) += h;
            out.a.back() -= h;
            break;
        case CoordKind::B:
            out.b.at(c.index) += h;
            out.b.back() -= h;
            break;
        case CoordKind::Alpha:
            out.alpha.at(c.index) += h;
            out.alpha.back() -= h;
            break;
        case CoordKind::Beta:
            out.beta.at(c.index) += h;
            out.beta.back() -= h;
            break;
        case CoordKind::T1:
            out.t1.at(c.index) += h;
            break;
        case CoordKind::T2:
            out.t2.at(c.index) += h;
            break;
        case CoordKind::S1:
            out.s1.at(c.index) += h;
            break;
        case CoordKind::S2:
            out.s2.at(c.index) += h;
            break;
        case CoordKind::Endpoint:
            out.E = pt.E.with_boundary(c.index, endpoint(pt, c.index) + h);
            break;
    }
    return out;
}

Functional log_tau_functional(BlockSizes sizes, TauOptions opts) {
    Functional f;
    f.depth = 0;
    f.eval = [sizes = std::move(sizes), opts](const TauPoint& pt) {
        return tau_log(sizes, pt, opts).logmag;
    };
    return f;
}

FdValue fd_first(const Functional& f, const TauPoint& at, const Coordinate& dir,
                 const FdPolicy& pol) {
    return central_richardson(f.eval, at, dir, pol.step(f.depth + 1), pol.richardson);
}

FdValue fd_mixed(const Functional& f, const TauPoint& at, const std::vector<Coordinate>& dirs,
                 const FdPolicy& pol) {
    if (dirs.empty()) return {f(at), 0.0};
    if (dirs.size() == 1) return fd_first(f, at, dirs[0], pol);

    std::vector<Coordinate> inner(dirs.begin() + 1, dirs.end());
    double inner_err = 0.0;
    auto g = [&](const TauPoint& pt) {
        auto v = fd_mixed(f, pt, inner, pol);
        inner_err = std::max(inner_err, v.error);
        return v.value;
    };
    double h = pol.step(f.depth + (int)dirs.size());
    auto out = central_richardson(g, at, dirs[0], h, pol.richardson);
    out.error += inner_err / h;
    return out;
}

Functional differentiate(const Functional& f, const Coordinate& dir, const FdPolicy& pol) {
    Functional g;
    g.depth = f.depth + 1;
    int depth = g.depth;
    g.eval = [f, dir, pol, depth](const TauPoint& pt) {
        return central_richardson(f.eval, pt, dir, pol.step(depth), pol.richardson).value;
    };
    return g;
}

OperatorExpr& OperatorExpr::add(Coordinate dir, double constant) {
    terms_.push_back({nullptr, constant, dir});
    return *this;
}

OperatorExpr& OperatorExpr::add(Coordinate dir, Coeff coeff) {
    terms_.push_back({std::move(coeff), 1.0, dir});
    return *this;
}

OperatorExpr& OperatorExpr::add_zeroth(double constant) {
    zeroth_.push_back({nullptr, constant});
    return *this;
}

OperatorExpr& OperatorExpr::add_zeroth(Coeff coeff) {
    zeroth_.push_back({std::move(coeff), 1.0});
    return *this;
}

OperatorExpr& OperatorExpr::add_op(const OperatorExpr& other, double factor) {
    for (const auto& t : other.terms_) {
        Term nt = t;
        nt.constant *= factor;
        terms_.push_back(std::move(nt));
    }
    for (const auto& z : other.zeroth_) zeroth_.push_back({z.first, z.second * factor});
    return *this;
}

Functional OperatorExpr::apply(const Functional& f, const FdPolicy& pol) const {
    Functional g;
    g.depth = f.depth + 1;
    int depth = g.depth;
    g.eval = [terms = terms_, zeroth = zeroth_, f, pol, depth](const TauPoint& pt) {
        double h = pol.step(depth);
        double s = 0.0;
        for (const auto& t : terms) {
            double co = t.constant * (t.coeff ? t.coeff(pt) : 1.0);
            if (co == 0.0) continue;
            s += co * central_richardson(f.eval, pt, t.dir, h, pol.richardson).value;
        }
        if (!zeroth.empty()) {
            double z = 0.0;
            for (const auto& zt : zeroth) z += zt.second * (zt.first ? zt.first(pt) : 1.0);
            if (z != 0.0) s += z * f(pt);
        }
        return s;
    };
    return g;
}

Functional bracket(const Functional& f, const Functional& g, const OperatorExpr& X,
                   const FdPolicy& pol) {
    return f_sub(f_mul(g, X.apply(f, pol)), f_mul(f, X.apply(g, pol)));
}

Functional f_const(double v) {
    return {[v](const TauPoint&) { return v; }, 0};
}

Functional f_add(Functional a, Functional b) {
    Functional out;
    out.depth = std::max(a.depth, b.depth);
    out.eval = [a = std::move(a), b = std::move(b)](const TauPoint& pt) { return a(pt) + b(pt); };
    return out;
}

Functional f_sub(Functional a, Functional b) {
    Functional out;
    out.depth = std::max(a.depth, b.depth);
    out.eval = [a = std::move(a), b = std::move(b)](const TauPoint& pt) { return a(pt) - b(pt); };
    return out;
}

Functional f_mul(Functional a, Functional b) {
    Functional out;
    out.depth = std::max(a.depth, b.depth);
    out.eval = [a = std::move(a), b = std::move(b)](const TauPoint& pt) { return a(pt) * b(pt); };
    return out;
}

Functional f_scale(Functional a, double s) {
    Functional out;
    out.depth = a.depth;
    out.eval = [a = std::move(a), s](const TauPoint& pt) { return s * a(pt); };
    return out;
}

Functional f_shift(Functional a, double s) {
    Functional out;
    out.depth = a.depth;
    out.eval = [a = std::move(a), s](const TauPoint& pt) { return a(pt) + s; };
    return out;
}

Functional f_log(Functional a) {
    Functional out;
    out.depth = a.depth;
    out.eval = [a = std::move(a)](const TauPoint& pt) { return std::log(a(pt)); };
    return out;
}

OperatorExpr op_boundary(int k, int n_endpoints) {
    OperatorExpr op;
    for (int i = 0; i < n_endpoints; ++i) {
        if (k == -1) {
            op.add({CoordKind::Endpoint, i}, 1.0);
        } else {
            op.add({CoordKind::Endpoint, i}, [i, k](const TauPoint& pt) {
                return std::pow(endpoint(pt, i), k + 1);
            });
        }
    }
    return op;
}

// A_j = -(1-d_jq) d/da_j + (1/q)(B_{-1} + sum_{l<q} d/da_l
//        - 2 sum_{l<q} alpha_l d/da_l - 2 sum_{l<p} beta_l d/db_l)
OperatorExpr op_A(int j, int q, int p, int n_endpoints) {
    OperatorExpr op = op_A_locus(j, q, n_endpoints);
    for (int l = 1; l < q; ++l)
        op.add({CoordKind::A, l - 1},
               [l, q](const TauPoint& pt) { return -2.0 * pt.alpha[l - 1] / q; });
    for (int l = 1; l < p; ++l)
        op.add({CoordKind::B, l - 1},
               [l, q](const TauPoint& pt) { return -2.0 * pt.beta[l - 1] / q; });
    return op;
}

OperatorExpr op_B(int j, int q, int p, int n_endpoints) {
    OperatorExpr op = op_B_locus(j, p, n_endpoints);
    for (int l = 1; l < q; ++l)
        op.add({CoordKind::A, l - 1},
               [l, p](const TauPoint& pt) { return -2.0 * pt.alpha[l - 1] / p; });
    for (int l = 1; l < p; ++l)
        op.add({CoordKind::B, l - 1},
               [l, p](const TauPoint& pt) { return -2.0 * pt.beta[l - 1] / p; });
    return op;
}

// hatA_j = (1/q) hatB_0 - (1-d_jq) d/dalpha_j + (1/q) sum_{l<q} d/dalpha_l
//          - (2/q)(sum_{l<q} alpha_l d/dalpha_l + sum_{l<p} beta_l d/dbeta_l)
OperatorExpr op_hatA(int j, int q, int p, int n_endpoints) {
    OperatorExpr op;
    op.add_op(op_hatB0(q, p, n_endpoints), 1.0 / q);
    if (j < q) op.add({CoordKind::Alpha, j - 1}, -1.0);
    for (int l = 1; l < q; ++l) op.add({CoordKind::Alpha, l - 1}, 1.0 / q);
    for (int l = 1; l < q; ++l)
        op.add({CoordKind::Alpha, l - 1},
               [l, q](const TauPoint& pt) { return -2.0 * pt.alpha[l - 1] / q; });
    for (int l = 1; l < p; ++l)
        op.add({CoordKind::Beta, l - 1},
               [l, q](const TauPoint& pt) { return -2.0 * pt.beta[l - 1] / q; });
    return op;
}

OperatorExpr op_hatB(int j, int q, int p, int n_endpoints) {
    OperatorExpr op;
    op.add_op(op_hatB0(q, p, n_endpoints), 1.0 / p);
    if (j < p) op.add({CoordKind::Beta, j - 1}, -1.0);
    for (int l = 1; l < p; ++l) op.add({CoordKind::Beta, l - 1}, 1.0 / p);
    for (int l = 1; l < q; ++l)
        op.add({CoordKind::Alpha, l - 1},
               [l, p](const TauPoint& pt) { return -2.0 * pt.alpha[l - 1] / p; });
    for (int l = 1; l < p; ++l)
        op.add({CoordKind::Beta, l - 1},
               [l, p](const TauPoint& pt) { return -2.0 * pt.beta[l - 1] / p; });
    return op;
}

OperatorExpr op_A_locus(int j, int q, int n_endpoints) {
    OperatorExpr op;
    if (j < q) op.add({CoordKind::A, j - 1}, -1.0);
    op.add_op(op_boundary(-1, n_endpoints), 1.0 / q);
    for (int l = 1; l < q; ++l) op.add({CoordKind::A, l - 1}, 1.0 / q);
    return op;
}

OperatorExpr op_B_locus(int j, int p, int n_endpoints) {
    OperatorExpr op;
    if (j < p) op.add({CoordKind::B, j - 1}, -1.0);
    op.add_op(op_boundary(-1, n_endpoints), 1.0 / p);
    for (int l = 1; l < p; ++l) op.add({CoordKind::B, l - 1}, 1.0 / p);
    return op;
}

// hatB_0 = B_0 - sum_{l<q} a_l d/da_l - sum_{l<p} b_l d/db_l
OperatorExpr op_hatB0(int q, int p, int n_endpoints) {
    OperatorExpr op = op_boundary(0, n_endpoints);
    for (int l = 1; l < q; ++l)
        op.add({CoordKind::A, l - 1}, [l](const TauPoint& pt) { return -pt.a[l - 1]; });
    for (int l = 1; l < p; ++l)
        op.add({CoordKind::B, l - 1}, [l](const TauPoint& pt) { return -pt.b[l - 1]; });
    return op;
}

} // namespace nbm
