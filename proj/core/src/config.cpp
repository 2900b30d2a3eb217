// SPDX-License-Identifier: Apache-2.0

#include "osm/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "osm/error.hpp"
#include "osm/io/csv.hpp"

namespace osm
{

namespace
{

using nlohmann::json;

// Reads keys out of one JSON object and rejects any it does not know.
class Section
{
public:
  Section(const json &j, std::string name) : j_(j), name_(std::move(name))
  {
    if (!j_.is_object())
    {
      throw ConfigError("config section '" + name_ + "' must be an object");
    }
  }
  ~Section() noexcept(false)
  {
    if (std::uncaught_exceptions() == 0)
    {
      for (const auto &[key, value] : j_.items())
      {
        if (!seen_.count(key))
        {
          throw ConfigError("unknown config key '" + path(key) + "'");
        }
      }
    }
  }
  Section(const Section &) = delete;
  Section &operator=(const Section &) = delete;

  template <class T>
  void get(const char *key, T &out)
  {
    seen_.insert(key);
    if (!j_.contains(key))
    {
      return;
    }
    try
    {
      out = j_.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
      throw ConfigError("config key '" + path(key) + "': " + e.what());
    }
  }

  // Sub-object or null when absent.
  const json *sub(const char *key)
  {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const std::string &key) const { return name_.empty() ? key : name_ + "." + key; }

private:
  const json &j_;
  std::string name_;
  std::set<std::string> seen_;
};

template <class E>
struct EnumName
{
  E value;
  const char *name;
};

constexpr EnumName<Mode> kModes[] = {{Mode::nls, "nls"}, {Mode::gpe, "gpe"}};
constexpr EnumName<OuterBoundary> kOuter[] = {{OuterBoundary::transmission, "transmission"},
                                              {OuterBoundary::neumann, "neumann"}};
constexpr EnumName<Algorithm> kAlgorithms[] = {{Algorithm::classical, "classical"},
                                               {Algorithm::preconditioned, "preconditioned"}};
constexpr EnumName<InitMode> kInit[] = {{InitMode::zero, "zero"}, {InitMode::random, "random"}};
constexpr EnumName<KrylovMethod> kKrylov[] = {{KrylovMethod::gmres, "gmres"},
                                              {KrylovMethod::bicgstab, "bicgstab"}};
constexpr EnumName<NonlinearTreatment> kNonlinear[] = {
    {NonlinearTreatment::lagged_volume, "lagged_volume"},
    {NonlinearTreatment::frozen_volume, "frozen_volume"},
    {NonlinearTreatment::boundary_only, "boundary_only"}};
constexpr EnumName<PadeFormulation> kPadeForm[] = {{PadeFormulation::condensed, "condensed"},
                                                   {PadeFormulation::block, "block"}};
constexpr EnumName<Datum> kDatum[] = {{Datum::moving_gaussian, "moving_gaussian"},
                                      {Datum::trap_gaussian, "trap_gaussian"},
                                      {Datum::file, "file"}};

template <class E, std::size_t K>
const char *name_of(const EnumName<E> (&table)[K], E v)
{
  for (const auto &e : table)
  {
    if (e.value == v)
    {
      return e.name;
    }
  }
  return "?";
}

template <class E, std::size_t K>
void get_enum(Section &s, const char *key, const EnumName<E> (&table)[K], E &out)
{
  std::string text;
  s.get(key, text);
  if (text.empty())
  {
    return;
  }
  for (const auto &e : table)
  {
    if (text == e.name)
    {
      out = e.value;
      return;
    }
  }
  std::string allowed;
  for (const auto &e : table)
  {
    allowed += std::string(allowed.empty() ? "" : "|") + e.name;
  }
  throw ConfigError("config key '" + s.path(key) + "': '" + text + "' is not one of " + allowed);
}

void get_pair(Section &s, const char *key, double &a, double &b)
{
  std::vector<double> v;
  s.get(key, v);
  if (v.empty())
  {
    return;
  }
  if (v.size() != 2)
  {
    throw ConfigError("config key '" + s.path(key) + "' must hold two numbers");
  }
  a = v[0];
  b = v[1];
}

Index node_count(double lo, double hi, double h, const char *what)
{
  const double cells = (hi - lo) / h;
  const double rounded = std::round(cells);
  if (!(cells >= 1.0 - 1e-9) || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
  {
    std::ostringstream os;
    os << what << ": the spacing " << h << " does not divide the interval [" << lo << ", " << hi
       << "]";
    throw ConfigError(os.str());
  }
  return static_cast<Index>(rounded) + 1;
}

}  // namespace

void RunConfig::validate() const
{
  if (!(x_right > x_left) || !(y_top > y_bottom))
  {
    throw ConfigError("domain bounds must be increasing");
  }
  if (!(dx > 0.0) || !(dy > 0.0))
  {
    throw ConfigError("mesh spacings must be positive");
  }
  grid();
  if (!(dt > 0.0))
  {
    throw ConfigError("time.dt must be positive");
  }
  step_count(t_final, dt);
  if (subdomains < 1)
  {
    throw ConfigError("subdomains must be at least 1");
  }
  if (tc != "robin" && tc != "pade")
  {
    throw ConfigError("transmission.kind must be robin or pade, got '" + tc + "'");
  }
  spec();
  schwarz.validate();
  if (mode == Mode::gpe)
  {
    gpe_config().validate();
  }
  if (datum == Datum::file && datum_file.empty())
  {
    throw ConfigError("datum.file is required when datum.kind is file");
  }
  for (int s : snapshot_steps)
  {
    if (s < 1)
    {
      throw ConfigError("output.snapshots entries must be positive step numbers");
    }
  }
  for (int n : n_list)
  {
    if (n < 1)
    {
      throw ConfigError("experiment.n_list entries must be at least 1");
    }
  }
  for (double v : p_list)
  {
    if (!(v > 0.0))
    {
      throw ConfigError("experiment.p_list entries must be positive");
    }
  }
  for (int v : m_list)
  {
    if (v < 1)
    {
      throw ConfigError("experiment.m_list entries must be at least 1");
    }
  }
  if (valid_zone_nodes < 2)
  {
    throw ConfigError("experiment.valid_zone_nodes must be at least 2");
  }
}

Grid RunConfig::grid() const
{
  return Grid::from_bounds(x_left, x_right, y_bottom, y_top, node_count(x_left, x_right, dx, "mesh.dx"),
                           node_count(y_bottom, y_top, dy, "mesh.dy"));
}

TransmissionSpec RunConfig::spec() const
{
  return tc == "robin" ? TransmissionSpec::robin(p) : TransmissionSpec::pade(m, theta, include_a0);
}

ProblemSetup RunConfig::problem() const
{
  ProblemSetup s;
  s.grid = grid();
  s.subdomains = subdomains;
  s.dt = dt;
  s.spec = spec();
  s.potential = PotentialField::zero(s.grid, Nonlinearity::cubic(nls_beta));
  s.local = local;
  s.outer = outer;
  return s;
}

GpeConfig RunConfig::gpe_config() const
{
  GpeConfig g = gpe;
  g.dt = dt;
  g.t_final = t_final;
  return g;
}

GpeRunConfig RunConfig::gpe_run_config() const
{
  GpeRunConfig r;
  r.gpe = gpe_config();
  r.grid = grid();
  r.subdomains = subdomains;
  r.spec = spec();
  r.outer = outer;
  r.local = local;
  r.schwarz = schwarz;
  r.snapshot_steps = snapshot_steps;
  return r;
}

int RunConfig::steps() const { return step_count(t_final, dt); }

RunConfig parse_config(std::string_view json_text)
{
  json doc;
  try
  {
    doc = json::parse(json_text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  {
    Section top(doc, "");
    get_enum(top, "mode", kModes, c.mode);
    if (const json *d = top.sub("domain"))
    {
      Section s(*d, "domain");
      get_pair(s, "x", c.x_left, c.x_right);
      get_pair(s, "y", c.y_bottom, c.y_top);
    }
    if (const json *d = top.sub("mesh"))
    {
      Section s(*d, "mesh");
      s.get("dx", c.dx);
      s.get("dy", c.dy);
    }
    if (const json *d = top.sub("time"))
    {
      Section s(*d, "time");
      s.get("dt", c.dt);
      s.get("T", c.t_final);
    }
    top.get("subdomains", c.subdomains);
    if (const json *d = top.sub("transmission"))
    {
      Section s(*d, "transmission");
      s.get("kind", c.tc);
      s.get("p", c.p);
      s.get("m", c.m);
      s.get("theta", c.theta);
      s.get("include_a0", c.include_a0);
    }
    get_enum(top, "outer", kOuter, c.outer);
    get_enum(top, "algorithm", kAlgorithms, c.schwarz.algorithm);
    if (const json *d = top.sub("init"))
    {
      Section s(*d, "init");
      get_enum(s, "mode", kInit, c.schwarz.init);
      s.get("seed", c.schwarz.seed);
    }
    if (const json *d = top.sub("schwarz"))
    {
      Section s(*d, "schwarz");
      s.get("tolerance", c.schwarz.tolerance);
      s.get("max_iterations", c.schwarz.max_iterations);
      s.get("parallel", c.schwarz.parallel);
    }
    if (const json *d = top.sub("krylov"))
    {
      Section s(*d, "krylov");
      get_enum(s, "method", kKrylov, c.schwarz.krylov.method);
      s.get("tolerance", c.schwarz.krylov.tolerance);
      s.get("max_iterations", c.schwarz.krylov.max_iterations);
      s.get("restart", c.schwarz.krylov.restart);
    }
    if (const json *d = top.sub("fixed_point"))
    {
      Section s(*d, "fixed_point");
      s.get("tolerance", c.schwarz.fixed_point.tolerance);
      s.get("max_iterations", c.schwarz.fixed_point.max_iterations);
    }
    if (const json *d = top.sub("local"))
    {
      Section s(*d, "local");
      get_enum(s, "nonlinear", kNonlinear, c.local.nonlinear);
      get_enum(s, "pade_formulation", kPadeForm, c.local.pade_formulation);
    }
    if (const json *d = top.sub("nls"))
    {
      Section s(*d, "nls");
      s.get("beta", c.nls_beta);
    }
    if (const json *d = top.sub("gpe"))
    {
      Section s(*d, "gpe");
      s.get("beta", c.gpe.beta);
      s.get("omega", c.gpe.omega);
      s.get("gamma_x", c.gpe.gamma_x);
      s.get("gamma_y", c.gpe.gamma_y);
    }
    if (const json *d = top.sub("datum"))
    {
      Section s(*d, "datum");
      get_enum(s, "kind", kDatum, c.datum);
      s.get("file", c.datum_file);
    }
    if (const json *d = top.sub("output"))
    {
      Section s(*d, "output");
      std::string dir;
      s.get("dir", dir);
      if (!dir.empty())
      {
        c.output_dir = dir;
      }
      s.get("snapshots", c.snapshot_steps);
    }
    if (const json *d = top.sub("experiment"))
    {
      Section s(*d, "experiment");
      s.get("n_list", c.n_list);
      s.get("p_list", c.p_list);
      s.get("m_list", c.m_list);
      s.get("valid_zone_nodes", c.valid_zone_nodes);
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw FileNotFound("config file not found: " + path.string());
  }
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig &c)
{
  json j;
  j["mode"] = name_of(kModes, c.mode);
  j["domain"] = {{"x", {c.x_left, c.x_right}}, {"y", {c.y_bottom, c.y_top}}};
  j["mesh"] = {{"dx", c.dx}, {"dy", c.dy}};
  j["time"] = {{"dt", c.dt}, {"T", c.t_final}};
  j["subdomains"] = c.subdomains;
  j["transmission"] = {{"kind", c.tc}, {"p", c.p}, {"m", c.m}, {"theta", c.theta}, {"include_a0", c.include_a0}};
  j["outer"] = name_of(kOuter, c.outer);
  j["algorithm"] = name_of(kAlgorithms, c.schwarz.algorithm);
  j["init"] = {{"mode", name_of(kInit, c.schwarz.init)}, {"seed", c.schwarz.seed}};
  j["schwarz"] = {{"tolerance", c.schwarz.tolerance},
                  {"max_iterations", c.schwarz.max_iterations},
                  {"parallel", c.schwarz.parallel}};
  j["krylov"] = {{"method", name_of(kKrylov, c.schwarz.krylov.method)},
                 {"tolerance", c.schwarz.krylov.tolerance},
                 {"max_iterations", c.schwarz.krylov.max_iterations},
                 {"restart", c.schwarz.krylov.restart}};
  j["fixed_point"] = {{"tolerance", c.schwarz.fixed_point.tolerance},
                      {"max_iterations", c.schwarz.fixed_point.max_iterations}};
  j["local"] = {{"nonlinear", name_of(kNonlinear, c.local.nonlinear)},
                {"pade_formulation", name_of(kPadeForm, c.local.pade_formulation)}};
  j["nls"] = {{"beta", c.nls_beta}};
  j["gpe"] = {{"beta", c.gpe.beta}, {"omega", c.gpe.omega}, {"gamma_x", c.gpe.gamma_x}, {"gamma_y", c.gpe.gamma_y}};
  j["datum"] = {{"kind", name_of(kDatum, c.datum)}, {"file", c.datum_file}};
  j["output"] = {{"dir", c.output_dir.string()}, {"snapshots", c.snapshot_steps}};
  j["experiment"] = {{"n_list", c.n_list},
                     {"p_list", c.p_list},
                     {"m_list", c.m_list},
                     {"valid_zone_nodes", c.valid_zone_nodes}};
  return j.dump(2);
}

CVec initial_datum(const RunConfig &cfg)
{
  const Grid g = cfg.grid();
  switch (cfg.datum)
  {
  case Datum::moving_gaussian:
    return interpolate(g, [](double x, double y) { return std::exp(Complex(-x * x - y * y, -0.5 * x)); });
  case Datum::trap_gaussian:
    return interpolate(g, [](double x, double y)
                       { return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * (x * x + 2.0 * y * y)); });
  case Datum::file:
    if (cfg.mode == Mode::gpe)
    {
      return load_ground_state(cfg.datum_file, g).phi;
    }
    {
      const Snapshot s = read_snapshot(cfg.datum_file);
      if (!same_shape(s.grid, g))
      {
        throw ConfigError("datum file " + cfg.datum_file + " does not match the run grid");
      }
      return s.values;
    }
  }
  throw ConfigError("unknown datum");
}

}  // namespace osm
