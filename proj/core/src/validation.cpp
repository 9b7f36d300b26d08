#include "poplab/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "poplab/analysis.hpp"
#include "poplab/error.hpp"
#include "poplab/parallel.hpp"
#include "poplab/rng.hpp"

namespace poplab::validation {

namespace {

constexpr std::size_t kMaxNotes = 5;

struct Instance1d {
    double t_f = 0.0;
    double t_fhat = 0.0;
    double rate = 1.0;
    double lo = 0.0;  // test points are uniform on [lo, hi]
    double hi = 1.0;
};

Instance1d draw_instance(Engine& rng) {
    std::uniform_real_distribution<double> thr(-3.0, 3.0), scale(0.25, 4.0);
    Instance1d in;
    in.t_f = thr(rng);
    in.t_fhat = thr(rng);
    in.rate = scale(rng);
    const double reach = 2.0 / in.rate;
    in.lo = std::min(in.t_f, in.t_fhat) - reach - 1.0;
    in.hi = std::max(in.t_f, in.t_fhat) + 1.0;
    return in;
}

// Strict-move response to a threshold, written out longhand so the suites do
// not lean on the response module they are checking.
double respond_1d(double thr, double rate, double x) {
    if (x >= thr) return x;
    return rate * (thr - x) < 2.0 ? thr : x;
}

// Accumulates violations from worker threads; notes keep the first few.
class Tally {
public:
    void add(std::size_t checks, std::size_t violations) {
        std::lock_guard lock(mu_);
        checks_ += checks;
        violations_ += violations;
    }
    void note(const std::string& what) {
        std::lock_guard lock(mu_);
        if (notes_.size() < kMaxNotes) notes_.push_back(what);
    }
    void finish(SuiteResult& r) const {
        r.checks = checks_;
        r.violations = violations_;
        r.notes.insert(r.notes.end(), notes_.begin(), notes_.end());
    }

private:
    std::mutex mu_;
    std::size_t checks_ = 0;
    std::size_t violations_ = 0;
    std::vector<std::string> notes_;
};

std::string describe(const Instance1d& in, double x) {
    std::ostringstream os;
    os.precision(17);
    os << "t_f=" << in.t_f << " t_fhat=" << in.t_fhat << " rate=" << in.rate << " x=" << x;
    return os.str();
}

template <typename PointCheck>
SuiteResult run_threshold_instances(const std::string& name, const PartitionOptions& opts, PointCheck check) {
    require(opts.instances > 0 && opts.points > 0, ErrorKind::validation, name + ": sizes must be positive");
    const auto start = std::chrono::steady_clock::now();
    const SeedSpec root{opts.seed, 0};
    Tally tally;
    parallel_for(opts.instances, opts.threads, [&](std::size_t k) {
        Engine rng = root.child("instance").child(k).engine();
        const Instance1d in = draw_instance(rng);
        const Classifier f = Classifier::threshold(0, in.t_f);
        const ContestantModel believed = ContestantModel::informed(Classifier::threshold(0, in.t_fhat));
        const CostSpec cost = CostSpec::scalar(in.rate);
        std::uniform_real_distribution<double> xs(in.lo, in.hi);
        std::size_t checks = 0, bad = 0;
        for (std::size_t i = 0; i < opts.points; ++i) {
            const double x = xs(rng);
            const SetTags tags = tag_point(f, believed, cost, label_of(x >= 0.0), FeatureVector::scalar(x));
            check(in, x, tags, checks, bad, tally);
        }
        tally.add(checks, bad);
    });
    SuiteResult r;
    r.name = name;
    r.cases = opts.instances;
    tally.finish(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace

SuiteResult partition_suite(const PartitionOptions& opts) {
    return run_threshold_instances("partition", opts, [&](const Instance1d& in, double x, const SetTags& tags,
                                                                 std::size_t& checks, std::size_t& bad, Tally& tally) {
        const double reach = 2.0 / in.rate;
        const double transparent = respond_1d(in.t_f, in.rate, x);
        const double dark = respond_1d(in.t_fhat, in.rate, x);
        const bool f_tr = transparent >= in.t_f;
        const bool f_dark = dark >= in.t_f;
        const bool in_E = f_tr != f_dark;
        // E(-1,1): the dark move lands where f rejects and the contestant's
        // threshold accepts. E(1,-1): the transparent move lands where f
        // accepts and the contestant's threshold rejects, and in the dark the
        // user stays put.
        const bool neg_pos = !f_dark && dark >= in.t_fhat && f_tr;
        const bool pos_neg = f_tr && transparent < in.t_fhat && transparent != x && dark == x;

        auto expect = [&](bool ok, const char* what) {
            ++checks;
            if (!ok) {
                ++bad;
                tally.note(std::string(what) + ": " + describe(in, x));
            }
        };
        expect(tags.in_E == in_E, "E membership differs from the raw responses");
        expect(tags.in_E_neg_pos == neg_pos, "E(-1,1) tag differs from its definition");
        expect(tags.in_E_pos_neg == pos_neg, "E(1,-1) tag differs from its definition");
        expect(in_E == (neg_pos != pos_neg), "E is not split by exactly one piece");
        expect(tags.in_E == (tags.in_E_neg_pos != tags.in_E_pos_neg), "tagged E is not split by exactly one piece");
        expect(!(neg_pos && pos_neg), "a point lies in both pieces");

        // The closed interval formula presumes the contestant's reach ends
        // below the Jury's threshold when the Jury is lower.
        const bool formula_applies = in.t_f > in.t_fhat || in.t_fhat - reach <= in.t_f;
        if (formula_applies && in.t_f != in.t_fhat) {
            const Interval iv = enlargement_interval_1d(in.t_f, in.t_fhat, reach);
            if (x != iv.lo && x != iv.hi) expect(iv.contains(x) == in_E, "interval disagrees with E");
        }
    });
}

SuiteResult sign_suite(const PartitionOptions& opts) {
    return run_threshold_instances("sign", opts, [](const Instance1d& in, double x, const SetTags& tags,
                                                    std::size_t& checks, std::size_t& bad, Tally& tally) {
        if (!tags.in_E) return;
        const bool f_tr = respond_1d(in.t_f, in.rate, x) >= in.t_f;
        const bool f_dark = respond_1d(in.t_fhat, in.rate, x) >= in.t_f;
        checks += 2;
        const bool ok_tags = tags.transparent_verdict == Label::positive && tags.dark_verdict == Label::negative;
        const bool ok_raw = f_tr && !f_dark;
        bad += (ok_tags ? 0 : 1) + (ok_raw ? 0 : 1);
        if (!ok_tags || !ok_raw) tally.note("E point with the wrong verdicts: " + describe(in, x));
    });
}

SuiteResult identity_suite(const IdentityOptions& opts) {
    require(opts.reports > 0 && opts.points > 0, ErrorKind::validation, "identity: sizes must be positive");
    const auto start = std::chrono::steady_clock::now();
    const SeedSpec root{opts.seed, 0};
    Tally tally;
    parallel_for(opts.reports, opts.threads, [&](std::size_t k) {
        const SeedSpec seed = root.child("report").child(k);
        Engine rng = seed.engine();
        std::uniform_real_distribution<double> u(-2.0, 2.0), scale(0.25, 4.0);
        const std::size_t dim = k % 3 == 2 ? 2 : 1;
        const double ks[] = {0.0, 0.02, 0.2};
        const double safety_k = ks[k % 3];

        DistributionSpec dist;
        Classifier f = Classifier::threshold(0, u(rng));
        Classifier fhat = Classifier::threshold(0, u(rng));
        std::vector<double> rates{scale(rng)};
        if (dim == 1) {
            dist = Gaussian1d{u(rng), scale(rng), ThresholdLabeler{0, u(rng)}};
        } else {
            dist = Mvn::diagonal({u(rng), u(rng)}, {scale(rng), scale(rng)}, LinearLabeler{{1.0, u(rng)}, u(rng)});
            f = Classifier::linear({scale(rng), u(rng)}, u(rng));
            fhat = Classifier::linear({scale(rng), u(rng)}, u(rng));
            rates.push_back(k % 2 == 0 ? 0.0 : scale(rng));
        }
        const CostSpec cost = CostSpec::linear_separable(rates);
        const Dataset test = synth_dataset(dist, opts.points, seed.child("data"));

        // Cycle through informed, one-sided and uninformed contestants.
        const ModelProvider provider = [&](std::size_t i, const Example&) {
            switch ((i + k) % 5) {
                case 0: return ContestantModel{Classifier::accept_all(), true, false};
                case 1: return ContestantModel{Classifier::reject_all(), false, true};
                default: return ContestantModel::informed(fhat);
            }
        };
        const PopReport rep = pop_report(f, provider, cost, test, {safety_k, false, 1});
        const bool ok = rep.identities_hold() && rep.counts.n == test.size() && rep.pop() >= -1.0 &&
                        rep.pop() <= 1.0 && rep.counts.E_minus <= rep.counts.err_transparent;
        tally.add(1, ok ? 0 : 1);
        if (!ok) tally.note("identity broken in report " + std::to_string(k) + " (" + f.describe() + ")");
    });
    SuiteResult r;
    r.name = "identity";
    r.cases = opts.reports;
    tally.finish(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

SuiteResult condition_suite(const ConditionOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    const SeedSpec root{opts.seed, 0};
    Engine rng = root.child("params").engine();
    std::uniform_real_distribution<double> alpha_d(-1.0, 1.0), sigma_d(0.1, 2.0), t_d(0.5, 3.0), off_d(-1.0, 4.0);

    SuiteResult r;
    r.name = "condition";
    std::size_t sufficient_seen = 0, boundary_seen = 0, strict_regime = 0, skipped = 0;
    auto violation = [&](const std::string& what, const TheoryParams& p) {
        ++r.violations;
        if (r.notes.size() < kMaxNotes) {
            std::ostringstream os;
            os.precision(17);
            os << what << ": alpha=" << p.alpha << " sigma=" << p.sigma << " t=" << p.t << " t_f=" << p.t_f
               << " t_fhat=" << p.t_fhat;
            r.notes.push_back(os.str());
        }
    };

    for (std::size_t draw = 0; draw < opts.max_draws; ++draw) {
        if (sufficient_seen >= opts.sufficient_cases && boundary_seen >= opts.boundary_cases) break;
        TheoryParams p;
        p.alpha = alpha_d(rng);
        p.sigma = sigma_d(rng);
        p.t = t_d(rng);
        p.t_f = p.alpha + std::uniform_real_distribution<double>(-1.0, p.t + 1.0)(rng);
        p.t_fhat = p.alpha + off_d(rng);
        if (p.t_f == p.t_fhat) continue;

        const double eps1 = derived_eps1(p);
        const double eps2 = derived_eps2(p);
        const PopCondition cond = pop_condition_1d(p);
        const bool below_budget = p.t_f - p.alpha < p.t;
        const bool boundary = below_budget && eps2 > 2.0 * eps1 && cond.mass_E <= 2.0 * eps1;
        const bool want_sufficient = cond.sufficient && sufficient_seen < opts.sufficient_cases;
        const bool want_boundary = boundary && boundary_seen < opts.boundary_cases;
        if (!want_sufficient && !want_boundary) continue;

        // Population side: exact integrals.
        const double population = population_pop_1d(p);
        ++r.checks;
        if (want_sufficient && !(population > 0.0)) violation("population POP not positive", p);
        if (want_boundary && population > 1e-12) violation("population POP positive below 2 eps1", p);

        // Sample side: the same statements on the empirical distribution.
        const Dataset sample = synth_dataset(Gaussian1d{p.alpha, p.sigma, ThresholdLabeler{0, p.alpha}}, opts.points,
                                             root.child("sample").child(draw));
        const CostSpec cost = CostSpec::scalar(2.0 / p.t);
        const Classifier f = Classifier::threshold(0, p.t_f);
        const Classifier optimum = Classifier::threshold(0, p.alpha + p.t);
        const ContestantModel believed = ContestantModel::informed(Classifier::threshold(0, p.t_fhat));
        const PopReport rep = pop_report(f, [&](std::size_t, const Example&) { return believed; }, cost, sample);
        const double err_star = strategic_error(optimum, BestResponse{optimum}, cost, sample);
        const double eps1_emp = rep.err_transparent() - err_star;
        // Compared on counts as well so rounding cannot flip a tie.
        const auto n = static_cast<double>(rep.counts.n);
        const double mass_counts = static_cast<double>(rep.counts.E);
        const double err_counts = static_cast<double>(rep.counts.err_transparent);
        const double star_counts = std::round(err_star * n);

        if (want_sufficient) {
            if (sufficient_condition(rep.mass_E(), err_star, eps1_emp) && mass_counts > 2.0 * err_counts) {
                ++sufficient_seen;
                ++r.checks;
                if (!(rep.pop() > 0.0)) violation("sample POP not positive", p);
            } else {
                ++skipped;
            }
        }
        if (want_boundary) {
            if (star_counts == 0.0 && mass_counts <= 2.0 * err_counts) {
                ++boundary_seen;
                ++r.checks;
                if (cond.regime) ++strict_regime;
                if (rep.counts.err_dark > rep.counts.err_transparent) violation("sample POP positive", p);
            } else {
                ++skipped;
            }
        }
    }

    r.cases = sufficient_seen + boundary_seen;
    if (sufficient_seen < opts.sufficient_cases || boundary_seen < opts.boundary_cases) {
        ++r.violations;
        r.notes.push_back("ran out of draws before collecting every case");
    }
    r.notes.push_back("sufficient-side cases: " + std::to_string(sufficient_seen));
    r.notes.push_back("converse-side cases: " + std::to_string(boundary_seen) + " (" + std::to_string(strict_regime) +
                      " also meet sigma < sigma0)");
    r.notes.push_back("draws rejected by the sample-level condition: " + std::to_string(skipped));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<std::string> suite_names() { return {"partition", "sign", "identity", "condition"}; }

SuiteResult run_suite(const std::string& name, std::size_t threads) {
    if (name == "partition") return partition_suite({10000, 1000, 1, threads});
    if (name == "sign") return sign_suite({10000, 1000, 1, threads});
    if (name == "identity") return identity_suite({2000, 500, 2, threads});
    if (name == "condition") return condition_suite();
    fail(ErrorKind::validation, "validate: unknown suite '" + name + "'");
}

}  // namespace poplab::validation
