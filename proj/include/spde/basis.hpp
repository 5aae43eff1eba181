#pragma once

namespace spde {

/// Eigenbases of the Laplacian on [0, 1].
///   Cosine: e_n(x)  = sqrt(2) cos((n - 1/2) pi x), with e_n'(0) = 0 and e_n(1) = 0
///   Sine:   e~_n(x) = sqrt(2) sin(n pi x),          with e~_n(0) = e~_n(1) = 0
enum class Basis { Cosine, Sine };

/// sin(pi r), exactly zero at integer r.
double sin_pi(double r);

double basis_eval(Basis basis, int n, double x);

/// (n - 1/2) pi
double cosine_frequency(int n);

/// b - (a beta_n)^2 for the cosine basis.
double lambda_additive(int n, double a, double b);

/// c - a^2 (n pi)^2 - b (n pi)^alpha for the sine basis with fractional damping.
double lambda_nonlocal(int n, double a, double b, double c, double alpha);

/// (exp(2 lambda t) - 1) / (2 lambda), continuous through lambda = 0.
double exprel2(double lambda, double t);

/// (exp(lambda t) - 1) / lambda = int_0^t exp(lambda (t - s)) ds.
double exprel1(double lambda, double t);

}  // namespace spde
