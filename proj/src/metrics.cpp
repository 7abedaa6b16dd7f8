#include "sfb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sfb/errors.hpp"

namespace sfb {

double mape(std::span<const double> actuals, std::span<const double> forecasts) {
	if (actuals.size() != forecasts.size() || actuals.empty())
		throw AlignmentError("mape: need equal non-empty vectors");
	double sum = 0.0;
	for (std::size_t i = 0; i < actuals.size(); ++i) {
		if (actuals[i] == 0.0) throw ZeroActualError("mape: zero actual at position " + std::to_string(i));
		sum += std::abs((actuals[i] - forecasts[i]) / actuals[i]);
	}
	return 100.0 / static_cast<double>(actuals.size()) * sum;
}

namespace {

void check_aligned(std::span<const ForecastRecord> a, std::span<const ForecastRecord> b,
                   const char* who) {
	if (a.size() != b.size() || a.empty())
		throw AlignmentError(std::string(who) + ": record sets differ in length");
	for (std::size_t i = 0; i < a.size(); ++i)
		if (a[i].origin != b[i].origin || a[i].horizon != b[i].horizon)
			throw AlignmentError(std::string(who) + ": records misaligned at position " +
			                     std::to_string(i));
}

double record_mape(std::span<const ForecastRecord> rs) {
	double sum = 0.0;
	for (const auto& r : rs) {
		if (r.y_actual == 0.0) throw ZeroActualError("mape: zero actual at " + r.origin.str());
		sum += std::abs(r.error / r.y_actual);
	}
	return 100.0 / static_cast<double>(rs.size()) * sum;
}

double loss_of(const ForecastRecord& r, DmLoss loss) {
	if (loss == DmLoss::Squared) return r.error * r.error;
	if (r.y_actual == 0.0) throw ZeroActualError("dm: zero actual at " + r.origin.str());
	return std::abs(r.error / r.y_actual);
}

} // namespace

std::string dm_loss_name(DmLoss loss) {
	return loss == DmLoss::Squared ? "squared" : "ape";
}

double rmape(std::span<const ForecastRecord> model, std::span<const ForecastRecord> baseline) {
	check_aligned(model, baseline, "rmape");
	const double mb = record_mape(baseline);
	if (mb == 0.0) throw DegenerateBaselineError("rmape: baseline MAPE is zero");
	return record_mape(model) / mb;
}

double plae(std::span<const ForecastRecord> a, std::span<const ForecastRecord> b) {
	check_aligned(a, b, "plae");
	std::size_t wins = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		if (std::abs(a[i].error) < std::abs(b[i].error)) ++wins;
	return static_cast<double>(wins) / static_cast<double>(a.size());
}

DmResult dm_test(std::span<const ForecastRecord> a, std::span<const ForecastRecord> b, int horizon,
                 DmLoss loss, const DmOptions& options) {
	check_aligned(a, b, "dm");
	const std::size_t n = a.size();
	if (n < 5) throw AlignmentError("dm: need at least 5 aligned records");
	if (horizon < 1) throw Error("dm: horizon must be >= 1");

	std::vector<double> d(n);
	for (std::size_t i = 0; i < n; ++i) d[i] = loss_of(a[i], loss) - loss_of(b[i], loss);
	double dbar = 0.0;
	for (const double v : d) dbar += v;
	dbar /= static_cast<double>(n);

	const int m = horizon - 1; // Bartlett truncation lag
	const auto gamma = [&](int lag) {
		double s = 0.0;
		for (std::size_t t = static_cast<std::size_t>(lag); t < n; ++t)
			s += (d[t] - dbar) * (d[t - static_cast<std::size_t>(lag)] - dbar);
		return s / static_cast<double>(n);
	};
	double lrv = gamma(0);
	for (int lag = 1; lag <= m; ++lag)
		lrv += 2.0 * (1.0 - static_cast<double>(lag) / static_cast<double>(m + 1)) * gamma(lag);

	if (!(lrv > 0.0))
		throw VarianceError("dm: non-positive long-run variance (degenerate differential)");

	DmResult res;
	res.statistic = dbar / std::sqrt(lrv / static_cast<double>(n));
	res.bandwidth = m;
	res.loss = loss;
	res.n = n;
	const double crit = n == options.small_n ? options.critical_small : options.critical_normal;
	res.significant_5pct = std::abs(res.statistic) >= crit;
	return res;
}

std::string family_of_model(const std::string& model_id) {
	if (model_id == "ARMA") return "linear";
	if (model_id == "L-SVR" || model_id == "P-SVR" || model_id == "G-SVR") return "svr";
	if (model_id == "RBF-NN" || model_id == "MLP-NN") return "nn";
	return "other";
}

namespace {

using CellKey = std::tuple<std::string, std::string, int>; // region, model, horizon

std::map<CellKey, std::vector<ForecastRecord>> group_cells(std::span<const ForecastRecord> records,
                                                           std::size_t eval_window) {
	std::map<CellKey, std::vector<ForecastRecord>> cells;
	for (const auto& r : records)
		cells[{r.region, r.model_id, r.horizon}].push_back(r);
	for (auto& [key, rs] : cells) {
		std::sort(rs.begin(), rs.end(),
		          [](const ForecastRecord& x, const ForecastRecord& y) { return x.origin < y.origin; });
		if (eval_window > 0 && rs.size() > eval_window)
			rs.erase(rs.begin(), rs.end() - static_cast<std::ptrdiff_t>(eval_window));
	}
	return cells;
}

double median_of(std::vector<double> v) {
	std::sort(v.begin(), v.end());
	const std::size_t n = v.size();
	if (n % 2 == 1) return v[n / 2];
	return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

EvaluationReport assemble_report(std::span<const ForecastRecord> records,
                                 std::span<const CellFailureInfo> failures,
                                 const ReportOptions& options) {
	EvaluationReport report;
	const auto cells = group_cells(records, options.eval_window);

	for (const auto& [key, rs] : cells) {
		const auto& [region, model, horizon] = key;
		CellScores s;
		s.region = region;
		s.model_id = model;
		s.horizon = horizon;
		s.n = rs.size();
		const auto baseline_it = cells.find({region, options.baseline_id, horizon});
		try {
			s.mape = record_mape(rs);
			if (baseline_it == cells.end()) {
				s.failed = true;
				s.failure = "baseline records unavailable";
			} else {
				s.rmape = rmape(rs, baseline_it->second);
				s.plae = plae(rs, baseline_it->second);
			}
		} catch (const Error& e) {
			s.failed = true;
			s.failure = e.what();
		}
		report.cells.push_back(std::move(s));
	}

	for (const auto& f : failures) {
		CellScores s;
		s.region = f.region;
		s.model_id = f.model_id;
		s.horizon = f.horizon;
		s.failed = true;
		s.failure = f.message;
		report.cells.push_back(std::move(s));
	}

	std::sort(report.cells.begin(), report.cells.end(), [](const CellScores& a, const CellScores& b) {
		return std::tie(a.region, a.model_id, a.horizon) < std::tie(b.region, b.model_id, b.horizon);
	});

	// DM between the best three models by MAPE, per (region, horizon)
	std::map<std::pair<std::string, int>, std::vector<const CellScores*>> by_region_h;
	for (const auto& c : report.cells)
		if (!c.failed) by_region_h[{c.region, c.horizon}].push_back(&c);
	for (auto& [rh, ranked] : by_region_h) {
		std::sort(ranked.begin(), ranked.end(), [](const CellScores* a, const CellScores* b) {
			return std::tie(a->mape, a->model_id) < std::tie(b->mape, b->model_id);
		});
		const std::size_t top = std::min<std::size_t>(ranked.size(), 3);
		for (std::size_t k = 1; k < top; ++k) {
			DmRow row;
			row.region = rh.first;
			row.horizon = rh.second;
			row.model_a = ranked[0]->model_id;
			row.model_b = ranked[k]->model_id;
			const auto& a = cells.at({row.region, row.model_a, row.horizon});
			const auto& b = cells.at({row.region, row.model_b, row.horizon});
			try {
				row.result = dm_test(a, b, row.horizon, options.loss, options.dm);
				row.status = "ok";
			} catch (const VarianceError&) {
				row.status = "degenerate";
			}
			report.dm.push_back(std::move(row));
		}
	}

	// family summary over per-cell rMAPE
	std::map<std::pair<int, int>, std::vector<double>> fam; // (family rank, horizon) -> rmapes
	const auto family_rank = [](const std::string& f) { return f == "linear" ? 0 : f == "svr" ? 1 : f == "nn" ? 2 : 3; };
	for (const auto& c : report.cells)
		if (!c.failed) fam[{family_rank(family_of_model(c.model_id)), c.horizon}].push_back(c.rmape);
	const char* names[4] = {"linear", "svr", "nn", "other"};
	for (const auto& [key, values] : fam) {
		FamilySummaryRow row;
		row.family = names[key.first];
		row.horizon = key.second;
		row.cells = values.size();
		double sum = 0.0;
		for (const double v : values) sum += v;
		row.mean_rmape = sum / static_cast<double>(values.size());
		row.median_rmape = median_of(values);
		report.summary.push_back(std::move(row));
	}

	return report;
}

} // namespace sfb
