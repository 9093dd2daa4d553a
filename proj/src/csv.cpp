#include <charconv>
#include <string>

#include "hrf/monitor.hpp"

namespace hrf {

namespace {

// Shortest round-trip representation; identical bits give identical text.
void append(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string csv_header() {
  return "t,E,dE_dt_rate,E_L,max_e_density,max_abs_K,int_K_sq,vol,inj_g0,mean_u,rho_l2,x_linf,bochner_bound";
}

std::string csv_row(const MonitorRow& row) {
  std::string out;
  out.reserve(256);
  for (double v : {row.t, row.energy, row.energy_rate, row.liouville, row.max_energy_density,
                   row.max_abs_curvature, row.curvature_l2_sq, row.volume, row.injectivity_radius,
                   row.mean_u, row.rho_l2, row.x_linf}) {
    append(out, v);
    out.push_back(',');
  }
  if (row.bochner) append(out, *row.bochner);
  return out;
}

}  // namespace hrf
