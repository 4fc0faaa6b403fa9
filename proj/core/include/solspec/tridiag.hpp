#pragma once

#include <vector>

namespace solspec {

/* Symmetric tridiagonal matrix with a constant off-diagonal, the shape
 * produced by central differences on a uniform grid. Eigenvalues by
 * Sturm-sequence bisection, eigenvectors by inverse iteration. */
class SymTridiag {
  public:
    SymTridiag(std::vector<double> diag, double off);

    std::size_t size() const { return d_.size(); }
    double off() const { return e_; }
    std::vector<double> const & diag() const { return d_; }

    /* number of eigenvalues strictly below x */
    int count_below(double x) const;
    double lower_bound() const;
    double upper_bound() const;

    /* the k smallest eigenvalues, each bracketed to width abs_tol (or to
     * a few ulps when abs_tol is 0) */
    std::vector<double> lowest(int k, double abs_tol) const;
    /* eigenvalue i refined from a guess; brackets of half-width w[i]
     * are widened until the Sturm counts confirm them */
    std::vector<double> refine(std::vector<double> const & guess, std::vector<double> const & w,
                               std::vector<double> const & abs_tol) const;
    /* all eigenvalues in [lo, hi) */
    std::vector<double> in_range(double lo, double hi, double abs_tol) const;

    /* unit-2-norm eigenvector for an eigenvalue approximation sigma */
    std::vector<double> eigenvector(double sigma, int iterations = 3) const;

  private:
    void bisect(double lo, double hi, int clo, int chi, int kmax, double abs_tol,
                std::vector<double> & out) const;
    std::vector<double> d_;
    double e_;
    double e2_;
    double pivmin_;
};

} // namespace solspec
