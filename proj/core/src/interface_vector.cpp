// SPDX-License-Identifier: Apache-2.0

#include "osm/schwarz/interface_vector.hpp"

#include <random>
#include <string>

#include "osm/error.hpp"

namespace osm
{

InterfaceVector::InterfaceVector(int subdomains, Index n_y)
  : InterfaceVector(subdomains, n_y, CVec::Zero(2 * (subdomains - 1) * n_y))
{
}

InterfaceVector::InterfaceVector(int subdomains, Index n_y, CVec data)
  : n_(subdomains), n_y_(n_y), data_(std::move(data))
{
  if (subdomains < 1 || n_y < 1)
  {
    throw ConfigError("interface vector needs at least one subdomain and one node");
  }
  if (data_.size() != 2 * (subdomains - 1) * n_y)
  {
    throw DimensionError("interface vector data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(2 * (subdomains - 1) * n_y));
  }
}

InterfaceVector InterfaceVector::random(int subdomains, Index n_y, std::uint64_t seed)
{
  InterfaceVector g(subdomains, n_y);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Index k = 0; k < g.size(); ++k)
  {
    const double re = u(rng);
    const double im = u(rng);
    g.data_[k] = Complex(re, im);
  }
  return g;
}

CVec InterfaceVector::left(int j) const
{
  return has_left(j) ? CVec(data_.segment(left_offset(j), n_y_)) : CVec(CVec::Zero(n_y_));
}

CVec InterfaceVector::right(int j) const
{
  return has_right(j) ? CVec(data_.segment(right_offset(j), n_y_)) : CVec(CVec::Zero(n_y_));
}

void InterfaceVector::set_left(int j, const CVec &trace)
{
  if (!has_left(j) || trace.size() != n_y_)
  {
    throw DimensionError("no stored left flux for subdomain " + std::to_string(j));
  }
  data_.segment(left_offset(j), n_y_) = trace;
}

void InterfaceVector::set_right(int j, const CVec &trace)
{
  if (!has_right(j) || trace.size() != n_y_)
  {
    throw DimensionError("no stored right flux for subdomain " + std::to_string(j));
  }
  data_.segment(right_offset(j), n_y_) = trace;
}

}  // namespace osm
