#include "jacobiflow/model_zoo.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace jacobiflow {
namespace {

constexpr int kMinDim = 1;
constexpr int kMaxDim = 4;

void require_dim(const ModelSpec &spec, int lo, int hi) {
  if (spec.dim < lo || spec.dim > hi)
    throw InvalidModel(to_string(spec.kind) + ": dimension " + std::to_string(spec.dim) +
                       " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

template <class S> S squared_norm(const Vec<S> &y) {
  S acc = constant<S>(0.0);
  for (const auto &c : y)
    acc = acc + c * c;
  return acc;
}

template <class S> Matrix<S> conformal(int m, const S &factor) {
  Matrix<S> g(m);
  for (int i = 0; i < m; ++i)
    g(i, i) = factor;
  return g;
}

ManifoldModel euclidean(const ModelSpec &spec) {
  ManifoldModel model;
  model.name = "euclidean";
  model.dim = spec.dim;
  model.christoffel = ChristoffelMap::from_generic(
      [](const auto &y, const auto &, const auto &) {
        using S = typename std::decay_t<decltype(y)>::value_type;
        return zeros<S>(y.size());
      });
  const int m = spec.dim;
  model.metric = MetricField::from_generic([m](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return conformal<S>(m, constant<S>(1.0));
  });
  return model;
}

std::vector<Vec<double>> axis_samples(int m, double radius) {
  std::vector<Vec<double>> samples{zeros<double>(static_cast<std::size_t>(m))};
  for (int a = 0; a < m; ++a) {
    for (double sgn : {-1.0, 1.0}) {
      Vec<double> p = zeros<double>(static_cast<std::size_t>(m));
      p[static_cast<std::size_t>(a)] = sgn * radius;
      samples.push_back(std::move(p));
    }
  }
  return samples;
}

ManifoldModel sphere(const ModelSpec &spec) {
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
    throw InvalidModel("sphere: radius must be positive");
  if (!(spec.pole_guard > 0.0))
    throw InvalidModel("sphere: pole_guard must be positive");
  const int m = spec.dim;
  const double r2 = spec.radius * spec.radius;
  const double scale = 4.0 * r2 * r2;
  ManifoldModel model;
  model.name = "sphere";
  model.dim = m;
  model.metric = MetricField::from_generic([m, r2, scale](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    const S q = r2 + squared_norm(y);
    return conformal<S>(m, scale / (q * q));
  });
  const double limit = spec.pole_guard * spec.radius;
  model.domain = [limit](const Vec<double> &y) { return norm2(y) < limit; };
  model.christoffel =
      levi_civita_from_metric(*model.metric, m, axis_samples(m, spec.radius));
  return model;
}

ManifoldModel half_plane(const ModelSpec &spec) {
  const int m = spec.dim;
  const auto last = static_cast<std::size_t>(m - 1);
  ManifoldModel model;
  model.name = "half_plane";
  model.dim = m;
  model.metric = MetricField::from_generic([m, last](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return conformal<S>(m, 1.0 / (y[last] * y[last]));
  });
  model.domain = [last](const Vec<double> &y) { return y[last] > 0.0; };
  std::vector<Vec<double>> samples;
  for (auto p : axis_samples(m, 0.5)) {
    p[last] += 1.0;
    samples.push_back(std::move(p));
  }
  model.christoffel = levi_civita_from_metric(*model.metric, m, samples);
  return model;
}

ManifoldModel torsion_demo(const ModelSpec &spec) {
  if (!std::isfinite(spec.beta))
    throw InvalidModel("torsion_demo: beta must be finite");
  const double beta = spec.beta;
  ManifoldModel model;
  model.name = "torsion_demo";
  model.dim = 2;
  model.christoffel = ChristoffelMap::from_generic(
      [beta](const auto &y, const auto &v, const auto &xi) {
        using S = typename std::decay_t<decltype(y)>::value_type;
        Vec<S> r = zeros<S>(2);
        r[1] = beta * (v[0] * xi[1] - v[1] * xi[0]);
        return r;
      });
  // The symmetric part vanishes, so the Euclidean metric is the natural one
  // for norms; the connection is not its Levi-Civita connection.
  model.metric = MetricField::from_generic([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return conformal<S>(2, constant<S>(1.0));
  });
  return model;
}

// --- custom metric families ------------------------------------------------

struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
};

struct PolynomialEntry {
  int i = 0;
  int j = 0;
  std::vector<Monomial> terms;
};

template <class S> S eval_monomials(const std::vector<Monomial> &terms, const Vec<S> &y) {
  S acc = constant<S>(0.0);
  for (const auto &t : terms) {
    S term = constant<S>(t.coef);
    for (std::size_t k = 0; k < t.powers.size(); ++k)
      if (t.powers[k] != 0)
        term = term * powi(y[k], t.powers[k]);
    acc = acc + term;
  }
  return acc;
}

template <class S> S eval_univariate(const std::vector<double> &coeffs, const S &r) {
  // Horner; coeffs[k] multiplies r^k.
  S acc = constant<S>(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * r + *it;
  return acc;
}

std::vector<double> number_list(const nlohmann::json &j, const char *what) {
  if (!j.is_array() || j.empty())
    throw InvalidModel(std::string("custom metric: '") + what +
                       "' must be a non-empty array of numbers");
  std::vector<double> out;
  for (const auto &x : j) {
    if (!x.is_number())
      throw InvalidModel(std::string("custom metric: '") + what + "' must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

MetricField polynomial_metric(int m, const nlohmann::json &params) {
  if (!params.contains("entries") || !params["entries"].is_array())
    throw InvalidModel("custom metric 'polynomial': missing 'entries' array");
  std::vector<PolynomialEntry> entries;
  for (const auto &e : params["entries"]) {
    PolynomialEntry entry;
    entry.i = e.at("i").get<int>();
    entry.j = e.at("j").get<int>();
    if (entry.i < 0 || entry.i >= m || entry.j < 0 || entry.j >= m)
      throw InvalidModel("custom metric 'polynomial': entry index out of range");
    for (const auto &t : e.at("terms")) {
      Monomial mono;
      mono.coef = t.at("c").get<double>();
      mono.powers = t.value("p", std::vector<int>(static_cast<std::size_t>(m), 0));
      if (static_cast<int>(mono.powers.size()) != m)
        throw InvalidModel("custom metric 'polynomial': power list must have length dim");
      for (int p : mono.powers)
        if (p < 0)
          throw InvalidModel("custom metric 'polynomial': negative power");
      entry.terms.push_back(std::move(mono));
    }
    entries.push_back(std::move(entry));
  }
  return MetricField::from_generic([m, entries](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    Matrix<S> g(m);
    for (const auto &e : entries) {
      const S value = eval_monomials(e.terms, y);
      g(e.i, e.j) = value;
      g(e.j, e.i) = value;
    }
    return g;
  });
}

MetricField conformal_rational_metric(int m, const nlohmann::json &params) {
  const auto num = number_list(params.value("numerator", nlohmann::json()), "numerator");
  const auto den =
      number_list(params.value("denominator", nlohmann::json::array({1.0})), "denominator");
  return MetricField::from_generic([m, num, den](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    const S r = squared_norm(y);
    return conformal<S>(m, eval_univariate(num, r) / eval_univariate(den, r));
  });
}

ManifoldModel custom_metric(const ModelSpec &spec) {
  const auto &params = spec.metric;
  if (!params.is_object() || !params.contains("family"))
    throw InvalidModel("custom metric: params must name a 'family'");
  const std::string family = params["family"].get<std::string>();
  const int m = spec.dim;

  ManifoldModel model;
  model.name = "custom:" + family;
  model.dim = m;
  if (family == "polynomial")
    model.metric = polynomial_metric(m, params);
  else if (family == "conformal_rational")
    model.metric = conformal_rational_metric(m, params);
  else
    throw InvalidModel("custom metric: unknown family '" + family + "'");

  Vec<double> center = zeros<double>(static_cast<std::size_t>(m));
  double half_width = 0.5;
  if (params.contains("box")) {
    const auto lo = number_list(params["box"].at("lo"), "box.lo");
    const auto hi = number_list(params["box"].at("hi"), "box.hi");
    if (static_cast<int>(lo.size()) != m || static_cast<int>(hi.size()) != m)
      throw InvalidModel("custom metric: box bounds must have length dim");
    for (int k = 0; k < m; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!(lo[uk] < hi[uk]))
        throw InvalidModel("custom metric: empty box");
      center[uk] = 0.5 * (lo[uk] + hi[uk]);
      half_width = std::fmin(half_width, 0.25 * (hi[uk] - lo[uk]));
    }
    model.domain = [lo, hi](const Vec<double> &y) {
      for (std::size_t k = 0; k < y.size(); ++k)
        if (!(y[k] > lo[k] && y[k] < hi[k]))
          return false;
      return true;
    };
  }
  std::vector<Vec<double>> samples;
  for (auto p : axis_samples(m, half_width))
    samples.push_back(add(p, center));
  model.christoffel = levi_civita_from_metric(*model.metric, m, samples);
  return model;
}

} // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
  case ModelKind::euclidean:
    return "euclidean";
  case ModelKind::sphere:
    return "sphere";
  case ModelKind::half_plane:
    return "half_plane";
  case ModelKind::torsion_demo:
    return "torsion_demo";
  case ModelKind::custom_metric:
    return "custom_metric";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string &name) {
  if (name == "euclidean")
    return ModelKind::euclidean;
  if (name == "sphere")
    return ModelKind::sphere;
  if (name == "half-plane" || name == "half_plane")
    return ModelKind::half_plane;
  if (name == "torsion-demo" || name == "torsion_demo")
    return ModelKind::torsion_demo;
  if (name == "custom" || name == "custom_metric" || name == "custom-metric")
    return ModelKind::custom_metric;
  throw InvalidModel("unknown model kind '" + name + "'");
}

ModelSpec model_spec_from_json(const nlohmann::json &config) try {
  if (!config.is_object() || !config.contains("kind"))
    throw InvalidModel("model config: expected an object with a 'kind' field");
  ModelSpec spec;
  spec.kind = parse_model_kind(config["kind"].get<std::string>());
  spec.dim = config.value("dim", 2);
  const nlohmann::json params = config.value("params", nlohmann::json::object());
  if (!params.is_object())
    throw InvalidModel("model config: 'params' must be an object");
  spec.radius = params.value("radius", spec.radius);
  spec.pole_guard = params.value("pole_guard", spec.pole_guard);
  spec.beta = params.value("beta", spec.beta);
  if (spec.kind == ModelKind::custom_metric)
    spec.metric = params;
  return spec;
} catch (const nlohmann::json::exception &e) {
  throw InvalidModel(std::string("model config: ") + e.what());
}

nlohmann::json to_json(const ModelSpec &spec) {
  nlohmann::json params = nlohmann::json::object();
  switch (spec.kind) {
  case ModelKind::sphere:
    params["radius"] = spec.radius;
    params["pole_guard"] = spec.pole_guard;
    break;
  case ModelKind::torsion_demo:
    params["beta"] = spec.beta;
    break;
  case ModelKind::custom_metric:
    params = spec.metric;
    break;
  default:
    break;
  }
  return {{"kind", to_string(spec.kind)}, {"dim", spec.dim}, {"params", params}};
}

ManifoldModel build(const ModelSpec &spec) {
  switch (spec.kind) {
  case ModelKind::euclidean:
    require_dim(spec, kMinDim, kMaxDim);
    return euclidean(spec);
  case ModelKind::sphere:
    require_dim(spec, kMinDim, kMaxDim);
    return sphere(spec);
  case ModelKind::half_plane:
    require_dim(spec, 2, kMaxDim);
    return half_plane(spec);
  case ModelKind::torsion_demo:
    require_dim(spec, 2, 2);
    return torsion_demo(spec);
  case ModelKind::custom_metric:
    require_dim(spec, kMinDim, kMaxDim);
    try {
      return custom_metric(spec);
    } catch (const nlohmann::json::exception &e) {
      throw InvalidModel(std::string("custom metric: ") + e.what());
    }
  }
  throw InvalidModel("unknown model kind");
}

} // namespace jacobiflow
