// SPDX-License-Identifier: Apache-2.0

#include "osm/io/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "osm/error.hpp"

namespace osm
{

namespace
{

void put(std::ostream &os, const char *fmt, double a, double b, double c, double d)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  os << buf;
}

double parse_double(const std::string &s, std::size_t line)
{
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
  {
    throw ConfigError("snapshot line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_history(std::ostream &os, const std::vector<ConvergenceHistory> &histories)
{
  os << "time_step,iteration,update_norm\n";
  char buf[96];
  for (const auto &h : histories)
  {
    for (std::size_t k = 0; k < h.update_norms.size(); ++k)
    {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.17g\n", h.time_step, k + 1, h.update_norms[k]);
      os << buf;
    }
  }
}

void write_snapshot(std::ostream &os, const Grid &g, const CVec &u)
{
  if (u.size() != g.num_nodes())
  {
    throw DimensionError("snapshot field does not match the grid");
  }
  os << "x,y,re,im\n";
  for (Index j = 0; j < g.n_y; ++j)
  {
    for (Index i = 0; i < g.n_x; ++i)
    {
      const Complex z = u[g.node(i, j)];
      put(os, "%.17g,%.17g,%.17g,%.17g\n", g.x(i), g.y(j), z.real(), z.imag());
    }
  }
}

void write_snapshot(const std::filesystem::path &path, const Grid &g, const CVec &u)
{
  std::ofstream os(path);
  if (!os)
  {
    throw Error("cannot write " + path.string());
  }
  write_snapshot(os, g, u);
}

std::string snapshot_filename(int index)
{
  return "snap_t" + std::to_string(index) + ".csv";
}

Snapshot read_snapshot(const std::filesystem::path &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw FileNotFound("snapshot file not found: " + path.string());
  }
  return read_snapshot(is);
}

Snapshot read_snapshot(std::istream &is)
{
  std::string line;
  if (!std::getline(is, line) || line != "x,y,re,im")
  {
    throw ConfigError("snapshot must start with the header x,y,re,im");
  }
  std::vector<double> xs, ys;
  std::vector<Complex> vals;
  std::size_t lineno = 1;
  while (std::getline(is, line))
  {
    ++lineno;
    if (line.empty())
    {
      continue;
    }
    std::stringstream ss(line);
    std::string f[4];
    for (auto &field : f)
    {
      if (!std::getline(ss, field, ','))
      {
        throw ConfigError("snapshot line " + std::to_string(lineno) + " has fewer than 4 fields");
      }
    }
    xs.push_back(parse_double(f[0], lineno));
    ys.push_back(parse_double(f[1], lineno));
    vals.emplace_back(parse_double(f[2], lineno), parse_double(f[3], lineno));
  }
  if (vals.empty())
  {
    throw ConfigError("snapshot has no data rows");
  }
  // Rows run x fastest: the first row of constant y fixes n_x.
  Index n_x = 1;
  while (n_x < static_cast<Index>(ys.size()) && ys[n_x] == ys[0])
  {
    ++n_x;
  }
  const Index total = static_cast<Index>(vals.size());
  if (total % n_x != 0)
  {
    throw ConfigError("snapshot rows do not form a rectangular grid");
  }
  const Index n_y = total / n_x;
  if (n_x < 2 || n_y < 2)
  {
    throw ConfigError("snapshot grid needs at least 2 nodes per direction");
  }
  Snapshot s;
  s.grid = Grid::from_bounds(xs.front(), xs[n_x - 1], ys.front(), ys.back(), n_x, n_y);
  s.values = CVec(total);
  for (Index k = 0; k < total; ++k)
  {
    s.values[k] = vals[k];
  }
  return s;
}

void write_interface_dump(std::ostream &os, const InterfaceVector &g)
{
  os << "side,subdomain,node,re,im\n";
  char buf[128];
  for (int j = 0; j < g.subdomains(); ++j)
  {
    for (Side side : {Side::left, Side::right})
    {
      const bool present = side == Side::left ? g.has_left(j) : g.has_right(j);
      if (!present)
      {
        continue;
      }
      const CVec t = side == Side::left ? g.left(j) : g.right(j);
      for (Index k = 0; k < t.size(); ++k)
      {
        std::snprintf(buf, sizeof buf, "%s,%d,%td,%.17g,%.17g\n",
                      side == Side::left ? "left" : "right", j, k, t[k].real(), t[k].imag());
        os << buf;
      }
    }
  }
}

void write_density(std::ostream &os, const Grid &g, const CVec &u)
{
  if (u.size() != g.num_nodes())
  {
    throw DimensionError("density field does not match the grid");
  }
  os << "x,y,density\n";
  char buf[96];
  for (Index j = 0; j < g.n_y; ++j)
  {
    for (Index i = 0; i < g.n_x; ++i)
    {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x(i), g.y(j),
                    std::norm(u[g.node(i, j)]));
      os << buf;
    }
  }
}

}  // namespace osm
