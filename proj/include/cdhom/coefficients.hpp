#pragma once

#include <string>
#include <vector>

namespace cdhom {

// Small dense d x d matrix, d <= 2. For d = 1 only m[0][0] is meaningful.
struct Mat2 {
    double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    static Mat2 scaled_identity(int dim, double s);
    static Mat2 full(double a11, double a12, double a21, double a22);

    // Smallest eigenvalue of the symmetric part, i.e. the ellipticity
    // constant of zeta^T A zeta at this point.
    double min_sym_eig(int dim) const;
    double max_offdiag_asymmetry() const { return m[0][1] - m[1][0]; }
};

// Scalar 1-periodic profile over one period.
struct Profile {
    enum class Kind { constant, sinusoid, piecewise };
    Kind kind = Kind::constant;
    double c0 = 1.0;   // constant value / sinusoid mean
    double amp = 0.0;  // sinusoid amplitude
    std::vector<double> values;  // piecewise-constant samples on [k/m,(k+1)/m)

    static Profile constant(double c);
    static Profile sinusoid(double mean, double amplitude);
    static Profile piecewise(std::vector<double> v);

    double operator()(double y) const;  // evaluated at y mod 1
    bool same_as(const Profile& other) const;
};

// Matrix-valued 1-periodic coefficient field on the unit cell. Uniform
// ellipticity is spot-checked on a 64^dim sample grid at construction and
// fields whose sampled ellipticity floor falls below 1e-8 are rejected.
class CoefficientField {
  public:
    enum class Kind { constant, diagonal_profiles, layered, tabulated };

    static CoefficientField constant(int dim, const Mat2& A);
    // A_ii(y) = p_i(y_i); p2 ignored when dim == 1.
    static CoefficientField diagonal(int dim, Profile p1,
                                     Profile p2 = Profile::constant(1.0));
    // Full 2x2 matrix with every entry a function of y_1 only.
    static CoefficientField layered(Profile a11, Profile a12, Profile a21,
                                    Profile a22);
    // Samples on a uniform periodic grid over the cell (y1 fastest),
    // multilinear interpolation. n2 ignored when dim == 1.
    static CoefficientField tabulated(int dim, int n1, int n2,
                                      std::vector<Mat2> samples);
    // File format: "dim n1 [n2]" header, then one sample per line
    // ("a" in 1D, "a11 a12 a21 a22" in 2D, y1 fastest).
    static CoefficientField tabulated_from_file(const std::string& path);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    double ellipticity_floor() const { return beta_; }
    bool symmetric() const;
    const Profile& profile(int k) const { return profiles_[k]; }

    Mat2 eval_cell(const double* y) const;
    Mat2 eval_cell(double y1, double y2 = 0.0) const;
    Mat2 eval_eps(const double* x, double eps) const;
    Mat2 eval_eps(double x1, double x2, double eps) const;

  private:
    CoefficientField() = default;
    void check_ellipticity();

    Kind kind_ = Kind::constant;
    int dim_ = 1;
    Mat2 const_ = Mat2::scaled_identity(2, 1.0);
    Profile profiles_[4];
    int tab_n1_ = 0, tab_n2_ = 0;
    std::vector<Mat2> tab_;
    double beta_ = 0.0;
};

}  // namespace cdhom
