#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace torwave::lapack {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/** All singular values of A, descending (zgesdd, values only). */
VectorXd singular_values(MatrixXcd a);

/** Smallest singular value of A. */
double smallest_singular_value(const MatrixXcd& a);

/** Eigenvalues of a general complex matrix (zgeev, no vectors). */
VectorXcd eigenvalues(MatrixXcd a);

/** Eigenvalues and right eigenvectors (zgeev). */
void eigensystem(MatrixXcd a, VectorXcd& values, MatrixXcd& vectors);

/** LU factorization with partial pivoting (zgetrf). */
class Lu {
  public:
    explicit Lu(MatrixXcd a);  // throws SingularOperator if exactly singular
    VectorXcd solve(const VectorXcd& b) const;          // A x = b
    VectorXcd solve_adjoint(const VectorXcd& b) const;  // A^* x = b
    double rcond(double anorm_1) const;                 // zgecon, 1-norm
    int size() const { return static_cast<int>(lu_.rows()); }

  private:
    MatrixXcd lu_;
    std::vector<int> piv_;
};

/** Upper Hessenberg form H unitarily similar to A (zgehrd; Q discarded).
 * Singular values of (A - sI) equal those of (H - sI) for any shift s. */
MatrixXcd hessenberg_form(MatrixXcd a);

/** Sigma_min of (H - shift*I) for an upper Hessenberg H, via Givens QR of the
 * shifted matrix (O(n^2)) and Lanczos on the inverse normal operator.
 * `rtol` is the relative tolerance on the returned value. */
double hessenberg_sigma_min(const MatrixXcd& h, std::complex<double> shift,
                            double rtol = 1e-8, int max_lanczos = 64);

}  // namespace torwave::lapack
