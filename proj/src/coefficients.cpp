#include "cdhom/coefficients.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cdhom {

namespace {

double mod1(double y) {
    const double r = y - std::floor(y);
    return r < 1.0 ? r : 0.0;
}

}  // namespace

Mat2 Mat2::scaled_identity(int dim, double s) {
    Mat2 a;
    a.m[0][0] = s;
    if (dim == 2) a.m[1][1] = s;
    return a;
}

Mat2 Mat2::full(double a11, double a12, double a21, double a22) {
    Mat2 a;
    a.m[0][0] = a11;
    a.m[0][1] = a12;
    a.m[1][0] = a21;
    a.m[1][1] = a22;
    return a;
}

double Mat2::min_sym_eig(int dim) const {
    if (dim == 1) return m[0][0];
    const double a = m[0][0], b = m[1][1];
    const double c = 0.5 * (m[0][1] + m[1][0]);
    const double mid = 0.5 * (a + b);
    const double rad = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
    return mid - rad;
}

Profile Profile::constant(double c) {
    Profile p;
    p.kind = Kind::constant;
    p.c0 = c;
    return p;
}

Profile Profile::sinusoid(double mean, double amplitude) {
    Profile p;
    p.kind = Kind::sinusoid;
    p.c0 = mean;
    p.amp = amplitude;
    return p;
}

Profile Profile::piecewise(std::vector<double> v) {
    if (v.empty())
        throw std::invalid_argument("Profile::piecewise: no samples");
    Profile p;
    p.kind = Kind::piecewise;
    p.values = std::move(v);
    return p;
}

double Profile::operator()(double y) const {
    const double t = mod1(y);
    switch (kind) {
        case Kind::constant:
            return c0;
        case Kind::sinusoid:
            return c0 + amp * std::sin(2.0 * std::numbers::pi * t);
        case Kind::piecewise: {
            const int n = (int)values.size();
            int k = (int)(t * n);
            if (k >= n) k = n - 1;
            return values[k];
        }
    }
    return c0;
}

bool Profile::same_as(const Profile& other) const {
    return kind == other.kind && c0 == other.c0 && amp == other.amp &&
           values == other.values;
}

CoefficientField CoefficientField::constant(int dim, const Mat2& A) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("CoefficientField: dim must be 1 or 2");
    CoefficientField f;
    f.kind_ = Kind::constant;
    f.dim_ = dim;
    f.const_ = A;
    if (dim == 1) {
        f.const_.m[0][1] = f.const_.m[1][0] = f.const_.m[1][1] = 0.0;
    }
    f.check_ellipticity();
    return f;
}

CoefficientField CoefficientField::diagonal(int dim, Profile p1, Profile p2) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("CoefficientField: dim must be 1 or 2");
    CoefficientField f;
    f.kind_ = Kind::diagonal_profiles;
    f.dim_ = dim;
    f.profiles_[0] = std::move(p1);
    f.profiles_[1] = std::move(p2);
    f.check_ellipticity();
    return f;
}

CoefficientField CoefficientField::layered(Profile a11, Profile a12,
                                           Profile a21, Profile a22) {
    CoefficientField f;
    f.kind_ = Kind::layered;
    f.dim_ = 2;
    f.profiles_[0] = std::move(a11);
    f.profiles_[1] = std::move(a12);
    f.profiles_[2] = std::move(a21);
    f.profiles_[3] = std::move(a22);
    f.check_ellipticity();
    return f;
}

CoefficientField CoefficientField::tabulated(int dim, int n1, int n2,
                                             std::vector<Mat2> samples) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("CoefficientField: dim must be 1 or 2");
    if (n1 < 1 || (dim == 2 && n2 < 1))
        throw std::invalid_argument("CoefficientField: tabulated grid empty");
    const std::size_t want = (dim == 1) ? (std::size_t)n1
                                        : (std::size_t)n1 * (std::size_t)n2;
    if (samples.size() != want)
        throw std::invalid_argument("CoefficientField: sample count mismatch");
    CoefficientField f;
    f.kind_ = Kind::tabulated;
    f.dim_ = dim;
    f.tab_n1_ = n1;
    f.tab_n2_ = (dim == 2) ? n2 : 1;
    f.tab_ = std::move(samples);
    f.check_ellipticity();
    return f;
}

CoefficientField CoefficientField::tabulated_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("CoefficientField: cannot open " + path);
    int dim = 0;
    if (!(in >> dim))
        throw std::invalid_argument("CoefficientField: bad header in " + path);
    int n1 = 0, n2 = 1;
    if (!(in >> n1))
        throw std::invalid_argument("CoefficientField: bad header in " + path);
    if (dim == 2 && !(in >> n2))
        throw std::invalid_argument("CoefficientField: bad header in " + path);
    const std::size_t count =
        (dim == 1) ? (std::size_t)n1 : (std::size_t)n1 * (std::size_t)n2;
    std::vector<Mat2> samples(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (dim == 1) {
            double a;
            if (!(in >> a))
                throw std::invalid_argument("CoefficientField: short file " + path);
            samples[k] = Mat2::scaled_identity(1, a);
        } else {
            double a, b, c, d;
            if (!(in >> a >> b >> c >> d))
                throw std::invalid_argument("CoefficientField: short file " + path);
            samples[k] = Mat2::full(a, b, c, d);
        }
    }
    return tabulated(dim, n1, n2, std::move(samples));
}

bool CoefficientField::symmetric() const {
    switch (kind_) {
        case Kind::constant:
            return const_.m[0][1] == const_.m[1][0];
        case Kind::diagonal_profiles:
            return true;
        case Kind::layered:
            return profiles_[1].same_as(profiles_[2]);
        case Kind::tabulated:
            for (const Mat2& a : tab_)
                if (a.m[0][1] != a.m[1][0]) return false;
            return true;
    }
    return false;
}

Mat2 CoefficientField::eval_cell(const double* y) const {
    switch (kind_) {
        case Kind::constant:
            return const_;
        case Kind::diagonal_profiles: {
            Mat2 a;
            a.m[0][0] = profiles_[0](y[0]);
            if (dim_ == 2) a.m[1][1] = profiles_[1](y[1]);
            return a;
        }
        case Kind::layered: {
            const double t = y[0];
            return Mat2::full(profiles_[0](t), profiles_[1](t), profiles_[2](t),
                              profiles_[3](t));
        }
        case Kind::tabulated: {
            const double t1 = mod1(y[0]) * tab_n1_;
            const int i0 = (int)t1 % tab_n1_;
            const int i1 = (i0 + 1) % tab_n1_;
            const double f1 = t1 - (double)(int)t1;
            if (dim_ == 1) {
                Mat2 a;
                a.m[0][0] = (1.0 - f1) * tab_[i0].m[0][0] + f1 * tab_[i1].m[0][0];
                return a;
            }
            const double t2 = mod1(y[1]) * tab_n2_;
            const int j0 = (int)t2 % tab_n2_;
            const int j1 = (j0 + 1) % tab_n2_;
            const double f2 = t2 - (double)(int)t2;
            Mat2 a;
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    const double v00 = tab_[(std::size_t)j0 * tab_n1_ + i0].m[r][c];
                    const double v10 = tab_[(std::size_t)j0 * tab_n1_ + i1].m[r][c];
                    const double v01 = tab_[(std::size_t)j1 * tab_n1_ + i0].m[r][c];
                    const double v11 = tab_[(std::size_t)j1 * tab_n1_ + i1].m[r][c];
                    a.m[r][c] = (1.0 - f2) * ((1.0 - f1) * v00 + f1 * v10) +
                                f2 * ((1.0 - f1) * v01 + f1 * v11);
                }
            return a;
        }
    }
    return const_;
}

Mat2 CoefficientField::eval_cell(double y1, double y2) const {
    const double y[2] = {y1, y2};
    return eval_cell(y);
}

Mat2 CoefficientField::eval_eps(const double* x, double eps) const {
    if (!(eps > 0.0))
        throw std::invalid_argument("eval_eps: eps must be > 0");
    const double y[2] = {x[0] / eps, dim_ == 2 ? x[1] / eps : 0.0};
    return eval_cell(y);
}

Mat2 CoefficientField::eval_eps(double x1, double x2, double eps) const {
    const double x[2] = {x1, x2};
    return eval_eps(x, eps);
}

void CoefficientField::check_ellipticity() {
    constexpr int kSamples = 64;
    constexpr double kBetaMin = 1e-8;
    double beta = 0.0;
    bool first = true;
    const int n2 = (dim_ == 2) ? kSamples : 1;
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < kSamples; ++i) {
            const double y[2] = {(i + 0.5) / kSamples, (j + 0.5) / kSamples};
            const double lam = eval_cell(y).min_sym_eig(dim_);
            if (first || lam < beta) beta = lam;
            first = false;
        }
    if (!(beta >= kBetaMin))
        throw std::invalid_argument(
            "CoefficientField: sampled ellipticity floor below 1e-8");
    beta_ = beta;
}

}  // namespace cdhom
