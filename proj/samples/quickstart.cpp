#include "sharpf/coupling/run.hpp"
#include "sharpf/factor.hpp"
#include "sharpf/pattern.hpp"
#include "sharpf/sampler.hpp"

#include <iostream>

using namespace sharpf;

int main() {
  Pattern f = preset("k3");
  std::cout << "triangle: r=" << f.r << " s=" << f.s << " aut=" << f.aut << " d1=" << to_string(f.d1) << '\n';

  const int n = 60;
  double p = 1.4 * p_star(f, n);
  Graph g = sample_gnp(n, p, {2024, 0});
  auto iso = f_isolated(g, f);
  auto res = find_f_factor(g, f);
  std::cout << "G(" << n << ", " << p << "): " << iso.isolated.size() << " F-isolated vertices, factor "
            << to_string(res.status) << '\n';
  if (res.certificate) std::cout << "certificate " << certificate_to_json(*res.certificate).dump() << '\n';

  auto t = derive_params(f, 6, 1.0 / 12, 1.0 / 72, 0.01);
  Transcript tr = run_coupling(f, 6, t, {7, 0});
  std::cout << "coupling at n=6, pi=0.01: " << to_string(tr.outcome) << ", H has " << tr.H.num_fedges()
            << " F-edges, G* has " << tr.G.base.num_edges() << " edges\n";
}
