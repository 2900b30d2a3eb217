// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_ERROR_HPP
#define OSM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace osm
{

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or inconsistent configuration.
class ConfigError : public Error
{
public:
  using Error::Error;
};

// Operand sizes do not match.
class DimensionError : public Error
{
public:
  using Error::Error;
};

// A pivot fell below the singularity threshold during factorization.
class SingularMatrix : public Error
{
public:
  SingularMatrix(std::size_t pivot, const std::string &what)
    : Error(what), pivot_(pivot)
  {
  }
  std::size_t pivot() const { return pivot_; }

private:
  std::size_t pivot_;
};

// An iterative process hit its iteration cap. Carries the best iterate seen and its
// residual so callers can decide whether the result is still usable.
class NotConverged : public Error
{
public:
  NotConverged(const std::string &what, double residual, int iterations,
               Eigen::VectorXcd best = {})
    : Error(what), residual_(residual), iterations_(iterations), best_(std::move(best))
  {
  }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }
  const Eigen::VectorXcd &best() const { return best_; }

private:
  double residual_;
  int iterations_;
  Eigen::VectorXcd best_;
};

// NaN or Inf appeared in an iterate.
class Diverged : public Error
{
public:
  using Error::Error;
};

// A point lies outside the region where a quantity is defined.
class DomainError : public Error
{
public:
  using Error::Error;
};

// Field with zero norm cannot be normalized.
class NormalizationError : public Error
{
public:
  using Error::Error;
};

class FileNotFound : public Error
{
public:
  using Error::Error;
};

// Failure inside one subdomain of a decomposition; the original exception is nested.
class SubdomainError : public Error
{
public:
  SubdomainError(int subdomain, const std::string &what)
    : Error("subdomain " + std::to_string(subdomain) + ": " + what), subdomain_(subdomain)
  {
  }
  int subdomain() const { return subdomain_; }

private:
  int subdomain_;
};

}  // namespace osm

#endif  // OSM_ERROR_HPP
