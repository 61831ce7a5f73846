// Plants a connected module on a grid network and compares the SConES and
// lasso selections chosen by cross-validation.

#include <iostream>

#include "netsel/selectpipe.hpp"

int main() {
  using namespace netsel;
  const auto data = generate_synthetic(120, 400, 12, 0.35, GraphKind::grid, 1);
  const std::vector<RegressionTask> tasks{{data.x.values(), data.y.values()}};

  CvOptions cv;
  cv.folds = 5;
  const auto scones = cv_grid_search(tasks, scones_selector({data.network}),
                                     default_scones_grid(tasks), cv);
  const PenaltySpec lasso;
  const auto baseline = cv_grid_search(tasks, regression_selector(lasso),
                                       default_regression_grid(tasks, lasso), cv);

  const auto show = [&](const char* name, const CvResult& r) {
    const auto& sel = r.final_selection.front();
    std::cout << name << ": " << sel.size() << " selected, F1 "
              << f1_score(sel, data.planted) << ", params";
    for (const auto& [k, v] : r.best().params) std::cout << ' ' << k << '=' << v;
    std::cout << '\n';
  };
  show("scones", scones);
  show("lasso ", baseline);
}
