// SPDX-License-Identifier: Apache-2.0

#include "hydrosem/symmetry/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>

#include "hydrosem/error.hpp"
#include "util/fftw_lock.hpp"

namespace hydrosem::symmetry
{

namespace
{

constexpr Complex kI{0.0, 1.0};

bool IsEven(const std::optional<Parity> &p)
{
  return *p == Parity::Even;
}

std::size_t NextPow2(std::size_t n)
{
  std::size_t m = 1;
  while (m < n)
  {
    m <<= 1;
  }
  return m;
}

// Owns a c2r plan and its buffers.
class InverseReal
{
public:
  explicit InverseReal(int n) : n_(n)
  {
    in_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    out_ = fftw_alloc_real(static_cast<std::size_t>(n));
    std::lock_guard<std::mutex> lock(util::FftwPlannerMutex());
    plan_ = fftw_plan_dft_c2r_1d(n, in_, out_, FFTW_ESTIMATE);
  }
  ~InverseReal()
  {
    {
      std::lock_guard<std::mutex> lock(util::FftwPlannerMutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  InverseReal(const InverseReal &) = delete;
  InverseReal &operator=(const InverseReal &) = delete;

  // out[t] = sum over the full conjugate-symmetric spectrum of X e^{+2 pi i m t / n}.
  template <class Half>
  const double *Run(const Half &half)
  {
    for (int m = 0; m <= n_ / 2; ++m)
    {
      in_[m][0] = half(m).real();
      in_[m][1] = half(m).imag();
    }
    if (n_ % 2 == 0)
    {
      in_[n_ / 2][1] = 0.0;
    }
    in_[0][1] = 0.0;
    fftw_execute(plan_);
    return out_;
  }

private:
  int n_;
  fftw_complex *in_;
  double *out_;
  fftw_plan plan_;
};

}  // namespace

void Validate(const SymmetryConfig &cfg, const mesh::HybridMesh &mesh)
{
  const std::pair<bool, mesh::BoundaryTag> planes[] = {{cfg.x, mesh::BoundaryTag::SymX()},
                                                       {cfg.y, mesh::BoundaryTag::SymY()}};
  for (const auto &[declared, tag] : planes)
  {
    if (declared && !mesh.HasTag(tag))
    {
      throw TaggingError(fmt::format("symmetry plane {} declared but not tagged in the mesh",
                                     tag.Name()));
    }
    if (!declared && mesh.HasTag(tag))
    {
      throw TaggingError(
          fmt::format("mesh has {} facets but the plane is not declared", tag.Name()));
    }
  }
}

ModeParity RigidParity(int k)
{
  // Table of theta: x-plane 1,0,1,0,1,0 and y-plane 0,1,1,1,0,0.
  static const bool tx[6] = {true, false, true, false, true, false};
  static const bool ty[6] = {false, true, true, true, false, false};
  if (k < 1 || k > 6)
  {
    throw ParityError(fmt::format("mode {} is not a rigid-body mode", k));
  }
  ModeParity p;
  p.x = tx[k - 1] ? Parity::Even : Parity::Odd;
  p.y = ty[k - 1] ? Parity::Even : Parity::Odd;
  return p;
}

bool RadiationFlag(int k, Plane plane, const ModeParity *declared)
{
  ModeParity p;
  if (k >= 1 && k <= 6)
  {
    p = RigidParity(k);
  }
  else if (declared != nullptr)
  {
    p = *declared;
  }
  const auto &v = plane == Plane::X ? p.x : p.y;
  if (!v)
  {
    throw ParityError(fmt::format("mode {} has no declared parity for the {} plane", k,
                                  plane == Plane::X ? "symx" : "symy"));
  }
  return IsEven(v);
}

std::string LabelName(BlockLabel b)
{
  switch (b)
  {
    case BlockLabel::Full:
      return "full";
    case BlockLabel::S:
      return "S";
    case BlockLabel::A:
      return "A";
    case BlockLabel::SS:
      return "SS";
    case BlockLabel::SA:
      return "SA";
    case BlockLabel::AS:
      return "AS";
    case BlockLabel::AA:
      return "AA";
  }
  return "?";
}

ModeParity BlockParity(const SymmetryConfig &cfg, BlockLabel label)
{
  ModeParity p;
  auto par = [](bool even) { return even ? Parity::Even : Parity::Odd; };
  switch (cfg.Count())
  {
    case 0:
      if (label != BlockLabel::Full)
      {
        throw ParameterError("only the full block exists without symmetry planes");
      }
      break;
    case 1:
      if (label != BlockLabel::S && label != BlockLabel::A)
      {
        throw ParameterError("one symmetry plane has blocks S and A only");
      }
      (cfg.x ? p.x : p.y) = par(label == BlockLabel::S);
      break;
    default:
      if (label == BlockLabel::Full || label == BlockLabel::S || label == BlockLabel::A)
      {
        throw ParameterError("two symmetry planes have blocks SS, SA, AS and AA only");
      }
      // First letter: dependence on x (reflection x -> -x); second: on y.
      p.y = par(label == BlockLabel::SS || label == BlockLabel::SA);
      p.x = par(label == BlockLabel::SS || label == BlockLabel::AS);
      break;
  }
  return p;
}

std::vector<SymmetryBlock> DiffractionBlocks(const SymmetryConfig &cfg)
{
  std::vector<BlockLabel> labels;
  switch (cfg.Count())
  {
    case 0:
      labels = {BlockLabel::Full};
      break;
    case 1:
      labels = {BlockLabel::S, BlockLabel::A};
      break;
    default:
      labels = {BlockLabel::SS, BlockLabel::SA, BlockLabel::AS, BlockLabel::AA};
      break;
  }
  std::vector<SymmetryBlock> out;
  for (auto l : labels)
  {
    const ModeParity p = BlockParity(cfg, l);
    SymmetryBlock b;
    b.label = l;
    b.theta_x = !p.x || IsEven(p.x);
    b.theta_y = !p.y || IsEven(p.y);
    out.push_back(b);
  }
  return out;
}

waves::PhaseFunction DecomposedPhase(const SymmetryConfig &cfg, BlockLabel label, double k,
                                     double beta)
{
  BlockParity(cfg, label);  // validates the label
  beta = std::remainder(beta, 2.0 * std::numbers::pi);
  const double c = std::cos(beta), s = std::sin(beta);
  using waves::PhaseValue;
  switch (label)
  {
    case BlockLabel::Full:
      return waves::PlaneWavePhase(k, beta);
    case BlockLabel::S:
    case BlockLabel::A:
    {
      const bool sym = label == BlockLabel::S;
      if (cfg.x)
      {
        // y = 0 plane: split the y dependence.
        return [=](double x, double y) {
          const Complex ex = std::polar(1.0, -k * x * c);
          const double cy = std::cos(k * y * s), sy = std::sin(k * y * s);
          if (sym)
          {
            return PhaseValue{ex * cy, -kI * c * ex * cy, -s * ex * sy};
          }
          return PhaseValue{-kI * ex * sy, -c * ex * sy, -kI * s * ex * cy};
        };
      }
      return [=](double x, double y) {
        const Complex ey = std::polar(1.0, -k * y * s);
        const double cx = std::cos(k * x * c), sx = std::sin(k * x * c);
        if (sym)
        {
          return PhaseValue{cx * ey, -c * sx * ey, -kI * s * cx * ey};
        }
        return PhaseValue{-kI * sx * ey, -kI * c * cx * ey, -s * sx * ey};
      };
    }
    default:
      return [=](double x, double y) {
        const double cx = std::cos(k * x * c), sx = std::sin(k * x * c);
        const double cy = std::cos(k * y * s), sy = std::sin(k * y * s);
        switch (label)
        {
          case BlockLabel::SS:
            return PhaseValue{cx * cy, -c * sx * cy, -s * cx * sy};
          case BlockLabel::SA:
            return PhaseValue{-kI * cx * sy, kI * c * sx * sy, -kI * s * cx * cy};
          case BlockLabel::AS:
            return PhaseValue{-kI * sx * cy, -kI * c * cx * cy, kI * s * sx * sy};
          default:
            return PhaseValue{-sx * sy, -c * cx * sy, -s * sx * cy};
        }
      };
  }
}

BlockLabel ForceBlock(const SymmetryConfig &cfg, const ModeParity &parity)
{
  if ((cfg.x && !parity.x) || (cfg.y && !parity.y))
  {
    throw ParityError("force parity is not declared for every symmetry plane");
  }
  switch (cfg.Count())
  {
    case 0:
      return BlockLabel::Full;
    case 1:
      return IsEven(cfg.x ? parity.x : parity.y) ? BlockLabel::S : BlockLabel::A;
    default:
      if (IsEven(parity.y))
      {
        return IsEven(parity.x) ? BlockLabel::SS : BlockLabel::SA;
      }
      return IsEven(parity.x) ? BlockLabel::AS : BlockLabel::AA;
  }
}

void BodyForcing(const ForcingRequest &req, const Eigen::MatrixXd &points,
                 const Eigen::MatrixXd &normals,
                 const std::function<void(Eigen::Index, const Eigen::MatrixXd &)> &sink)
{
  if (req.impulse == nullptr || !(req.dt > 0.0) || req.num_samples < 1)
  {
    throw ParameterError("forcing request needs an impulse, dt > 0 and samples");
  }
  if (points.rows() != normals.rows())
  {
    throw ParameterError("forcing points and normals differ in count");
  }
  const std::size_t want = std::max<std::size_t>(
      2 * static_cast<std::size_t>(req.num_samples),
      static_cast<std::size_t>(std::ceil(req.min_period / req.dt)));
  const int m_fft = static_cast<int>(NextPow2(want));
  const int nbins = m_fft / 2 + 1;
  // The series is m_fft-periodic; negative times sit at the end.
  const long k0 = std::lround(req.t_start / req.dt);
  const double dw = 2.0 * std::numbers::pi / (m_fft * req.dt);

  std::vector<double> wk(static_cast<std::size_t>(nbins));
  std::vector<Complex> gh(static_cast<std::size_t>(nbins));
  for (int m = 0; m < nbins; ++m)
  {
    wk[m] = waves::SolveDispersion(m * dw, req.env);
    gh[m] = req.impulse->Spectrum(m * dw);
  }
  // Bins where the impulse spectrum has underflowed contribute nothing.
  const double gmax = std::abs(gh[0]);
  int used = nbins;
  while (used > 1 && std::abs(gh[used - 1]) < 1e-300 * std::max(gmax, 1.0))
  {
    --used;
  }

  InverseReal inv(m_fft);
  const double scale = 1.0 / (m_fft * req.dt);
  const Eigen::Index chunk = 64;
  Eigen::MatrixXcd spec(chunk, nbins);
  for (Eigen::Index first = 0; first < points.rows(); first += chunk)
  {
    const Eigen::Index n = std::min(chunk, points.rows() - first);
    const Eigen::MatrixXd pts = points.middleRows(first, n);
    spec.setZero();
    for (int m = 0; m < used; ++m)
    {
      const auto phase = DecomposedPhase(req.cfg, req.label, wk[m], req.beta);
      const auto f = waves::IncidentFields(req.env, m * dw, wk[m], phase, pts);
      for (Eigen::Index q = 0; q < n; ++q)
      {
        const auto &g = f[static_cast<std::size_t>(q)].grad;
        const Complex ndg = normals(first + q, 0) * g[0] + normals(first + q, 1) * g[1] +
                            normals(first + q, 2) * g[2];
        spec(q, m) = -ndg * gh[m];
      }
    }
    Eigen::MatrixXd out(n, req.num_samples);
    for (Eigen::Index q = 0; q < n; ++q)
    {
      const double *s = inv.Run([&](int m) { return spec(q, m); });
      for (int t = 0; t < req.num_samples; ++t)
      {
        const long k = ((t + k0) % m_fft + m_fft) % m_fft;
        out(q, t) = s[k] * scale;
      }
    }
    sink(first, out);
  }
}

Eigen::MatrixXd BodyForcingSeries(const ForcingRequest &req, const Eigen::MatrixXd &points,
                                  const Eigen::MatrixXd &normals)
{
  Eigen::MatrixXd all(points.rows(), req.num_samples);
  BodyForcing(req, points, normals,
              [&](Eigen::Index first, const Eigen::MatrixXd &b) { all.middleRows(first, b.rows()) = b; });
  return all;
}

Eigen::VectorXd RealSeriesFromSpectrum(const Eigen::VectorXcd &spectrum, double dt)
{
  const Eigen::Index m = spectrum.size();
  if (m < 2 || !(dt > 0.0))
  {
    throw ParameterError("spectrum needs at least two bins and dt > 0");
  }
  const double tol = 1e-10 * std::max(spectrum.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i <= m / 2; ++i)
  {
    const Eigen::Index j = (m - i) % m;
    if (std::abs(spectrum(i) - std::conj(spectrum(j))) > tol)
    {
      throw SpectralInputError(
          fmt::format("spectrum is not conjugate symmetric at bin {} (real series expected)", i));
    }
  }
  InverseReal inv(static_cast<int>(m));
  const double *s = inv.Run([&](int i) { return spectrum(i); });
  Eigen::VectorXd out(m);
  for (Eigen::Index t = 0; t < m; ++t)
  {
    out(t) = s[t] / (static_cast<double>(m) * dt);
  }
  return out;
}

std::map<int, ForceSeries> RecombineForces(
    const SymmetryConfig &cfg, const std::map<BlockLabel, std::map<int, ForceSeries>> &solved,
    const std::map<int, ModeParity> &requested)
{
  std::map<int, ForceSeries> out;
  const double mult = cfg.Multiplier();
  for (const auto &[j, parity] : requested)
  {
    const BlockLabel b = ForceBlock(cfg, parity);
    const auto it = solved.find(b);
    if (it == solved.end() || !it->second.count(j))
    {
      throw SchedulingError(
          fmt::format("force {} needs block {}, which was not solved", j, LabelName(b)));
    }
    ForceSeries f = it->second.at(j);
    for (auto &v : f)
    {
      v *= mult;
    }
    out[j] = std::move(f);
  }
  return out;
}

}  // namespace hydrosem::symmetry
