#include "lmfmm/tables.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <mutex>

#include "lmfmm/specfun.hpp"

namespace lmfmm {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

LegendreProductCoeffs::LegendreProductCoeffs(int p, double k_target, double k_source)
    : p_(p), kt_(k_target), ks_(k_source) {
  if (p < 0 || p > 12)
    throw std::invalid_argument("LegendreProductCoeffs: p out of the supported range");
  b_.assign(bidx(p, p, p) + 1, 0.0);
  for (int n = 0; n <= p; ++n) {
    for (int m = 0; m <= n; ++m) {
      const double cnm = std::sqrt((2.0 * n + 1.0) / (4.0 * pi) * factorial(n - m) /
                                   factorial(n + m));
      const int r = r_of(n, m);
      // a_{nm}^j from the Rodrigues polynomial, then resum (kz/k)^{2(j-r)}
      // into powers of (k_rho/k)^{2s}
      std::vector<double> a(n + 1, 0.0);
      for (int j = (n + m + 1) / 2; j <= n; ++j) {
        a[j] = (((n - j) & 1) ? -1.0 : 1.0) * factorial(2 * j) * cnm /
               (std::pow(2.0, n) * factorial(j) * factorial(n - j) * factorial(2 * j - n - m));
      }
      for (int s = 0; s <= n - r; ++s) {
        double acc = 0.0;
        for (int j = std::max((n + m + 1) / 2, s + r); j <= n; ++j)
          acc += ((s & 1) ? -1.0 : 1.0) * a[j] * factorial(j - r) /
                 (factorial(s) * factorial(j - r - s));
        b_[bidx(n, m, s)] = acc;
      }
    }
  }
  kt_pow_.assign(2 * p + 3, 1.0);
  ks_pow_.assign(2 * p + 3, 1.0);
  for (int i = 1; i < int(kt_pow_.size()); ++i) {
    kt_pow_[i] = kt_pow_[i - 1] * kt_;
    ks_pow_[i] = ks_pow_[i - 1] * ks_;
  }
}

std::size_t LegendreProductCoeffs::bidx(int n, int m, int s) const {
  // dense (n, m, s) block, m <= n, s <= n; simple cubic layout
  return (std::size_t(n) * (p_ + 1) + m) * (p_ + 1) + s;
}

double LegendreProductCoeffs::A(int tn, int tm, int sn, int sm, int s) const {
  const int am = std::abs(tm), am2 = std::abs(sm);
  const int r = r_of(tn, am), r2 = r_of(sn, am2);
  const double tau = ((tm < 0 && (am & 1)) ? -1.0 : 1.0) * ((sm < 0 && (am2 & 1)) ? -1.0 : 1.0);
  double acc = 0.0;
  const int tlo = std::max(s - (sn - r2), 0), thi = std::min(s, tn - r);
  for (int t = tlo; t <= thi; ++t)
    acc += b_[bidx(tn, am, t)] * b_[bidx(sn, am2, s - t)] /
           (kt_pow_[am + 2 * t] * ks_pow_[am2 + 2 * (s - t)]);
  return tau * acc;
}

STableIndexSet::STableIndexSet(int p) : p_(p) {
  nb_max_ = 2 * p;
  mp_max_ = 2 * p + 2;
  pos_.assign(key(nb_max_, mp_max_, 1, 1) + 1, -1);
  auto add = [&](int nb, int mp, int mu, int nu) {
    std::size_t k = key(nb, mp, mu, nu);
    if (pos_[k] < 0) {
      pos_[k] = int(list_.size());
      list_.push_back({nb, mp, mu, nu});
    }
  };
  for (int tn = 0; tn <= p; ++tn)
    for (int tm = -tn; tm <= tn; ++tm)
      for (int sn = 0; sn <= p; ++sn)
        for (int sm = -sn; sm <= sn; ++sm) {
          const int am = std::abs(tm), am2 = std::abs(sm);
          const int mu = (tn + am) & 1, nu = (sn + am2) & 1;
          const int r = (tn + am) / 2, r2 = (sn + am2) / 2;
          for (int s = 0; s <= (tn - r) + (sn - r2); ++s)
            add(std::abs(sm - tm), am + am2 + 2 * s, mu, nu);
        }
}

std::size_t STableIndexSet::key(int nb, int mp, int mu, int nu) const {
  return ((std::size_t(nb) * (mp_max_ + 1) + mp) << 2) | (mu << 1) | nu;
}

int STableIndexSet::position(int nb, int mp, int mu, int nu) const {
  if (nb < 0 || nb > nb_max_ || mp < 0 || mp > mp_max_) return -1;
  return pos_[key(nb, mp, mu, nu)];
}

cplx assemble_I(const LegendreProductCoeffs& coeffs, const STableIndexSet& idx,
                const cplx* s_values, int tn, int tm, int sn, int sm) {
  const int am = std::abs(tm), am2 = std::abs(sm);
  const int mu = (tn + am) & 1, nu = (sn + am2) & 1;
  const int nb = std::abs(sm - tm);
  const double fold = (sm - tm < 0) ? parity(nb) : 1.0;  // J_{-n} = (-1)^n J_n
  cplx acc = 0.0;
  const int smax = coeffs.s_max(tn, tm, sn, sm);
  for (int s = 0; s <= smax; ++s) {
    int posn = idx.position(nb, am + am2 + 2 * s, mu, nu);
    if (posn < 0) throw std::logic_error("assemble_I: index outside the table set");
    acc += coeffs.A(tn, tm, sn, sm, s) * s_values[posn];
  }
  return ipow(tn + sn + 1) * fold * acc;
}

Table3D::Table3D(SommerfeldTask::IndexQuad id, GridAxis rho, GridAxis z, GridAxis zp)
    : id_(id), rho_(rho), z_(z), zp_(zp) {
  for (const GridAxis* a : {&rho_, &z_, &zp_}) {
    if (a->cells < 1) throw std::invalid_argument("Table3D: axis needs at least one cell");
    if (!(a->hi > a->lo)) throw std::invalid_argument("Table3D: empty axis range");
  }
  vals_.assign(std::size_t(rho_.points()) * z_.points() * zp_.points(), cplx(0.0));
}

cplx& Table3D::node(int i, int j, int k) {
  return vals_[(std::size_t(i) * z_.points() + j) * zp_.points() + k];
}

cplx Table3D::node(int i, int j, int k) const {
  return vals_[(std::size_t(i) * z_.points() + j) * zp_.points() + k];
}

bool Table3D::contains(double rho, double z, double zp) const {
  const double e = 1e-12;
  return rho >= rho_.lo - e && rho <= rho_.hi + e && z >= z_.lo - e && z <= z_.hi + e &&
         zp >= zp_.lo - e && zp <= zp_.hi + e;
}

namespace {

// cubic Lagrange weights on the 4 points of the enclosing cell
struct CellQuery {
  int base;       // first point index of the cell (multiple of 3)
  double w[4];
};

CellQuery cell_query(const GridAxis& ax, double x) {
  CellQuery q;
  const double h = ax.step();
  int cell = int((x - ax.lo) / (3.0 * h));
  cell = std::max(0, std::min(ax.cells - 1, cell));
  q.base = 3 * cell;
  const double t = (x - (ax.lo + q.base * h)) / h;  // in [0, 3] inside the cell
  q.w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  q.w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  q.w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  q.w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
  return q;
}

}  // namespace

cplx Table3D::interpolate(double rho, double z, double zp) const {
  if (!contains(rho, z, zp)) throw std::out_of_range("Table3D::interpolate: outside grid");
  const CellQuery qi = cell_query(rho_, rho), qj = cell_query(z_, z), qk = cell_query(zp_, zp);
  cplx acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      cplx row = 0.0;
      const cplx* line = &vals_[(std::size_t(qi.base + a) * z_.points() + (qj.base + b)) *
                                    zp_.points() + qk.base];
      for (int c = 0; c < 4; ++c) row += qk.w[c] * line[c];
      acc += qi.w[a] * qj.w[b] * row;
    }
  }
  return acc;
}

bool TableSet::contains(double rho, double z, double zp) const {
  return !tabs_.empty() && tabs_.front().contains(rho, z, zp);
}

void TableSet::interpolate_all(double rho, double z, double zp, cplx* out) const {
  if (!contains(rho, z, zp)) throw std::out_of_range("TableSet: query outside grid");
  const Table3D& t0 = tabs_.front();
  const CellQuery qi = cell_query(t0.rho_axis(), rho), qj = cell_query(t0.z_axis(), z),
                  qk = cell_query(t0.zp_axis(), zp);
  const int np_z = t0.z_axis().points(), np_zp = t0.zp_axis().points();
  for (std::size_t t = 0; t < tabs_.size(); ++t) {
    const std::vector<cplx>& v = tabs_[t].values();
    cplx acc = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const cplx* line =
            &v[(std::size_t(qi.base + a) * np_z + (qj.base + b)) * np_zp + qk.base];
        cplx row = qk.w[0] * line[0] + qk.w[1] * line[1] + qk.w[2] * line[2] + qk.w[3] * line[3];
        acc += qi.w[a] * qj.w[b] * row;
      }
    out[t] = acc;
  }
}

cplx TableSet::interpolate(int nb, int mp, int mu, int nu, double rho, double z, double zp) const {
  int posn = idx_.position(nb, mp, mu, nu);
  if (posn < 0) throw std::invalid_argument("TableSet::interpolate: index not tabulated");
  return tabs_[posn].interpolate(rho, z, zp);
}

TableSet build_tables(const SommerfeldTask& task, int p, const GridAxis& rho, const GridAxis& z,
                      const GridAxis& zp) {
  // every grid node must respect the side conditions for convergence
  if (task.target_offset(z.lo) <= 0.0 || task.target_offset(z.hi) <= 0.0)
    throw std::invalid_argument("build_tables: z axis crosses the separating interface");
  if (task.source_offset(zp.lo) <= 0.0 || task.source_offset(zp.hi) <= 0.0)
    throw std::invalid_argument("build_tables: z' axis crosses the separating interface");

  TableSet set;
  set.p_ = p;
  set.comp_ = task.component();
  set.l_ = task.target_layer();
  set.lp_ = task.source_layer();
  set.digest_ = task.stack().digest();
  set.idx_ = STableIndexSet(p);
  for (const auto& q : set.idx_.entries()) set.tabs_.emplace_back(q, rho, z, zp);

  const int ni = rho.points(), nj = z.points(), nk = zp.points();
  const std::size_t total = std::size_t(ni) * nj * nk;
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex err_mutex;
  parallel_for(total, [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> buf(set.idx_.count());
    for (std::size_t node = lo; node < hi; ++node) {
      if (failed.load(std::memory_order_relaxed)) return;
      const int i = int(node / (std::size_t(nj) * nk));
      const int j = int((node / nk) % nj);
      const int k = int(node % nk);
      const double r = rho.lo + i * rho.step();
      const double zz = z.lo + j * z.step();
      const double zpp = zp.lo + k * zp.step();
      try {
        task.s_values(set.idx_.entries(), r, zz, zpp, buf.data());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> g(err_mutex);
        failed = true;
        error = e.what();
        return;
      }
      for (std::size_t t = 0; t < buf.size(); ++t) set.tabs_[t].node(i, j, k) = buf[t];
    }
  });
  if (failed) throw std::runtime_error("build_tables: node quadrature failed: " + error);
  return set;
}

namespace {

constexpr std::uint32_t kMagic = 0x4c4d5354u;  // "LMST"
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("table file: truncated or unreadable");
}

void put_axis(std::ostream& os, const GridAxis& a) {
  put(os, a.lo);
  put(os, a.hi);
  put(os, std::int32_t(a.cells));
}

GridAxis get_axis(std::istream& is) {
  GridAxis a;
  std::int32_t c;
  get(is, a.lo);
  get(is, a.hi);
  get(is, c);
  a.cells = c;
  return a;
}

}  // namespace

void TableSet::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("TableSet::save: cannot open " + path);
  put(os, kMagic);
  put(os, kVersion);
  put(os, std::int32_t(comp_));
  put(os, std::int32_t(l_));
  put(os, std::int32_t(lp_));
  put(os, std::int32_t(p_));
  put(os, digest_);
  put(os, std::uint64_t(tabs_.size()));
  if (!tabs_.empty()) {
    put_axis(os, tabs_.front().rho_axis());
    put_axis(os, tabs_.front().z_axis());
    put_axis(os, tabs_.front().zp_axis());
  }
  for (const Table3D& t : tabs_) {
    put(os, std::int32_t(t.id().n_bessel));
    put(os, std::int32_t(t.id().m_power));
    put(os, std::int32_t(t.id().mu));
    put(os, std::int32_t(t.id().nu));
    os.write(reinterpret_cast<const char*>(t.values().data()),
             std::streamsize(t.values().size() * sizeof(cplx)));
  }
  if (!os) throw std::runtime_error("TableSet::save: write failed for " + path);
}

TableSet TableSet::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("TableSet::load: cannot open " + path);
  std::uint32_t magic, version;
  get(is, magic);
  get(is, version);
  if (magic != kMagic) throw std::runtime_error("TableSet::load: not a table file");
  if (version != kVersion) throw std::runtime_error("TableSet::load: unsupported version");
  TableSet set;
  std::int32_t comp, l, lp, p;
  std::uint64_t ntab;
  get(is, comp);
  get(is, l);
  get(is, lp);
  get(is, p);
  get(is, set.digest_);
  get(is, ntab);
  set.comp_ = Component(comp);
  set.l_ = l;
  set.lp_ = lp;
  set.p_ = p;
  set.idx_ = STableIndexSet(p);
  if (ntab != set.idx_.count())
    throw std::runtime_error("TableSet::load: table count does not match the index set");
  GridAxis rho = get_axis(is), z = get_axis(is), zp = get_axis(is);
  set.tabs_.reserve(ntab);
  for (std::uint64_t t = 0; t < ntab; ++t) {
    std::int32_t nb, mp, mu, nu;
    get(is, nb);
    get(is, mp);
    get(is, mu);
    get(is, nu);
    const auto& expect = set.idx_.entries()[t];
    if (nb != expect.n_bessel || mp != expect.m_power || mu != expect.mu || nu != expect.nu)
      throw std::runtime_error("TableSet::load: index layout mismatch");
    Table3D tab(expect, rho, z, zp);
    is.read(reinterpret_cast<char*>(tab.values().data()),
            std::streamsize(tab.values().size() * sizeof(cplx)));
    if (!is) throw std::runtime_error("TableSet::load: truncated value block");
    set.tabs_.push_back(std::move(tab));
  }
  return set;
}

SValueProvider::SValueProvider(const SommerfeldTask& task, const STableIndexSet& idx,
                               const TableSet* tables)
    : task_(&task), idx_(&idx), tables_(tables) {
  if (tables_) {
    if (tables_->order_max() < idx.order_max())
      throw std::invalid_argument("SValueProvider: tables built for a smaller order");
    if (tables_->stack_digest() != task.stack().digest())
      throw std::invalid_argument("SValueProvider: tables built for a different layer stack");
    if (tables_->component() != task.component() || tables_->target_layer() != task.target_layer() ||
        tables_->source_layer() != task.source_layer())
      throw std::invalid_argument("SValueProvider: tables built for a different task");
  }
}

void SValueProvider::eval(double rho, double z, double zp, cplx* out) const {
  if (tables_ && tables_->contains(rho, z, zp) && tables_->order_max() == idx_->order_max()) {
    tables_->interpolate_all(rho, z, zp, out);
    hits_.fetch_add(1, std::memory_order_relaxed);
    return;
  }
  if (tables_ && tables_->contains(rho, z, zp)) {
    // same grid, smaller requested order: interpolate entry by entry
    bool ok = true;
    for (std::size_t t = 0; t < idx_->count(); ++t) {
      const auto& q = idx_->entries()[t];
      int posn = tables_->index_set().position(q.n_bessel, q.m_power, q.mu, q.nu);
      if (posn < 0) {
        ok = false;
        break;
      }
      out[t] = tables_->tables()[posn].interpolate(rho, z, zp);
    }
    if (ok) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return;
    }
  }
  task_->s_values(idx_->entries(), rho, z, zp, out);
  fallbacks_.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace lmfmm
