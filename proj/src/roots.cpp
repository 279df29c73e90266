#include "qbattery/roots.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qb {

namespace {

Complex horner3(const std::array<Complex, 4>& c, Complex s) {
    return ((s + c[1]) * s + c[2]) * s + c[3];
}

Complex dhorner3(const std::array<Complex, 4>& c, Complex s) {
    return (3.0 * s + 2.0 * c[1]) * s + c[2];
}

// Newton refinement that never leaves a root worse than it found it.
Complex polish(const std::array<Complex, 4>& c, Complex s, int max_iters) {
    Complex best = s;
    double best_res = std::abs(horner3(c, s));
    for (int it = 0; it < max_iters && best_res > 0.0; ++it) {
        const Complex d = dhorner3(c, s);
        if (std::abs(d) == 0.0) {
            break;
        }
        const Complex step = horner3(c, s) / d;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            break;
        }
        s -= step;
        const double res = std::abs(horner3(c, s));
        if (res < best_res) {
            best_res = res;
            best = s;
        }
        if (std::abs(step) <= 1e-17 * (1.0 + std::abs(s))) {
            break;
        }
    }
    return best;
}

void sort_roots(std::array<Complex, 3>& q) {
    std::sort(q.begin(), q.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

std::array<Complex, 3> cardano(const std::array<Complex, 4>& c) {
    const Complex c2 = c[1], c1 = c[2], c0 = c[3];
    const Complex shift = c2 / 3.0;
    const Complex p = c1 - c2 * c2 / 3.0;
    const Complex q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;

    std::array<Complex, 3> v;
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        v = {Complex(0.0), Complex(0.0), Complex(0.0)};
    } else {
        const Complex r = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        // pick the larger-magnitude cube, avoiding cancellation in -q/2 +- r
        Complex u3 = -q / 2.0 + r;
        if (std::abs(-q / 2.0 - r) > std::abs(u3)) {
            u3 = -q / 2.0 - r;
        }
        if (std::abs(u3) == 0.0) {
            const Complex w = std::pow(-q, 1.0 / 3.0);
            const Complex rot(-0.5, std::sqrt(3.0) / 2.0);
            v = {w, w * rot, w * rot * rot};
        } else {
            const Complex u = std::pow(u3, 1.0 / 3.0);
            const Complex rot(-0.5, std::sqrt(3.0) / 2.0);
            Complex uk = u;
            for (int k = 0; k < 3; ++k) {
                v[k] = uk - p / (3.0 * uk);
                uk *= rot;
            }
        }
    }
    for (auto& vk : v) {
        vk -= shift;
    }
    return v;
}

struct BranchScales {
    double root_scale;  // magnitude reference for degeneracy checks
};

// Residues of a monic quadratic (u^2 - a^2 shifted back by b) over the monic
// branch cubic, computed from shift-invariant differences.
std::array<Complex, 3> residues_from(const std::array<Complex, 3>& u, Complex a) {
    std::array<Complex, 3> w;
    for (int i = 0; i < 3; ++i) {
        Complex denom(1.0, 0.0);
        for (int j = 0; j < 3; ++j) {
            if (j != i) denom *= u[i] - u[j];
        }
        w[i] = (u[i] * u[i] - a * a) / denom;
    }
    return w;
}

}  // namespace

std::array<Complex, 4> branch_cubic(const KernelSpec& k, double d_coupling, int branch_sign) {
    const Complex iD(0.0, static_cast<double>(branch_sign) * d_coupling);
    const Complex b = k.b;
    const Complex a2 = k.a * k.a;
    return {
        Complex(1.0, 0.0),
        2.0 * b + iD,
        b * b - a2 + 2.0 * b * iD + k.g0,
        iD * (b * b - a2) + k.g0 * b,
    };
}

std::array<Complex, 3> solve_cubic(const std::array<Complex, 4>& coeffs) {
    std::array<Complex, 4> c = coeffs;
    if (c[0] != Complex(1.0, 0.0)) {
        if (std::abs(c[0]) == 0.0) {
            throw SolverError("solve_cubic: leading coefficient is zero");
        }
        for (int i = 1; i < 4; ++i) c[i] /= c[0];
        c[0] = Complex(1.0, 0.0);
    }
    for (const auto& ci : c) {
        if (!std::isfinite(ci.real()) || !std::isfinite(ci.imag())) {
            throw SolverError("solve_cubic: non-finite coefficient");
        }
    }

    std::array<Complex, 3> q = cardano(c);
    for (auto& qi : q) {
        qi = polish(c, qi, 10);
    }
    sort_roots(q);

    std::ostringstream diag;
    bool ok = true;
    for (const auto& qi : q) {
        const double res = std::abs(horner3(c, qi));
        const double tol = 1e-12 * std::max(1.0, std::pow(std::abs(qi), 3.0));
        if (!(res <= tol)) {
            ok = false;
            diag << " root=(" << qi.real() << "," << qi.imag() << ") residual=" << res
                 << " tol=" << tol << ";";
        }
    }
    if (!ok) {
        throw SolverError("solve_cubic: Newton polishing did not converge:" + diag.str());
    }
    return q;
}

namespace {

// Root finder for the stiff regime where |b| dwarfs every other rate (the
// as-printed kernel at optical frequencies). Works in the shifted variable
// u = s + b, whose coefficients do not mix the disparate magnitudes, then
// refines the one slow root back in s.
std::array<Complex, 3> solve_shifted(const KernelSpec& k, double d_coupling, int branch_sign,
                                     Complex extra_c0, std::array<Complex, 3>& u_out) {
    const Complex iD(0.0, static_cast<double>(branch_sign) * d_coupling);
    const Complex b = k.b;
    const Complex a2 = k.a * k.a;
    const Complex B = iD - b;
    const Complex C = k.g0 - a2;
    const Complex E = -B * a2 + extra_c0;
    const std::array<Complex, 4> ucubic{Complex(1.0, 0.0), B, C, E};

    // dominant root sits near -B; two Newton steps already nail it
    Complex u_big = polish(ucubic, -B, 8);

    // deflate and solve the remaining quadratic stably
    const Complex p1 = B + u_big;
    const Complex p0 = C + p1 * u_big;
    const Complex r = std::sqrt(p1 * p1 - 4.0 * p0);
    Complex t = (std::abs(p1 + r) >= std::abs(p1 - r)) ? -(p1 + r) / 2.0 : -(p1 - r) / 2.0;
    Complex u1, u2;
    if (std::abs(t) == 0.0) {
        u1 = std::sqrt(-p0);
        u2 = -u1;
    } else {
        u1 = t;
        u2 = p0 / t;
    }
    u1 = polish(ucubic, u1, 8);
    u2 = polish(ucubic, u2, 8);

    // the slow root loses its tiny damping in u_big - b; recover it in s
    std::array<Complex, 4> scubic = branch_cubic(k, d_coupling, branch_sign);
    scubic[3] += extra_c0;
    const Complex q_big = polish(scubic, u_big - b, 8);

    u_out = {u_big, u1, u2};
    return {q_big, u1 - b, u2 - b};
}

}  // namespace

BranchRoots branch_roots(const KernelSpec& k, double d_coupling, int branch_sign) {
    const double other_scale =
        std::max({1.0, std::abs(k.a), d_coupling, k.g0});
    const bool stiff = std::abs(k.b) > 1e4 * other_scale;

    BranchRoots br;
    br.branch_sign = branch_sign;
    br.a = k.a;
    br.b = k.b;

    auto solve_once = [&](Complex extra_c0, std::array<Complex, 3>& u_vals) {
        if (stiff) {
            return solve_shifted(k, d_coupling, branch_sign, extra_c0, u_vals);
        }
        std::array<Complex, 4> c = branch_cubic(k, d_coupling, branch_sign);
        c[3] += extra_c0;
        std::array<Complex, 3> q = solve_cubic(c);
        u_vals = {q[0] + k.b, q[1] + k.b, q[2] + k.b};
        return q;
    };

    std::array<Complex, 3> u_vals;
    std::array<Complex, 3> q = solve_once(Complex(0.0), u_vals);

    // near-degenerate roots: nudge the constant coefficient and re-solve
    double max_abs = 0.0, min_gap = INFINITY;
    for (int i = 0; i < 3; ++i) {
        max_abs = std::max(max_abs, std::abs(q[i]));
        for (int j = i + 1; j < 3; ++j) {
            min_gap = std::min(min_gap, std::abs(q[i] - q[j]));
        }
    }
    if (min_gap < 1e-8 * std::max(1.0, max_abs)) {
        const std::array<Complex, 4> c = branch_cubic(k, d_coupling, branch_sign);
        const Complex bump = (std::abs(c[3]) > 0.0)
                                 ? c[3] * 1e-10
                                 : Complex(1e-10 * std::max({1.0, std::abs(c[1]), std::abs(c[2])}));
        q = solve_once(bump, u_vals);
        br.perturbed = true;
    }

    // sort roots and keep the shift-invariant u values aligned
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (q[i].real() != q[j].real()) return q[i].real() < q[j].real();
        return q[i].imag() < q[j].imag();
    });
    std::array<Complex, 3> q_sorted, u_sorted;
    for (int i = 0; i < 3; ++i) {
        q_sorted[i] = q[idx[i]];
        u_sorted[i] = u_vals[idx[i]];
    }

    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(u_sorted[i] - u_sorted[j]) == 0.0) {
                throw SolverError("branch_roots: coincident roots survived perturbation");
            }
        }
    }

    br.roots = q_sorted;
    br.residues = residues_from(u_sorted, k.a);
    return br;
}

}  // namespace qb
