#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fcd/activation.hpp"
#include "fcd/contour.hpp"
#include "fcd/deform.hpp"
#include "fcd/descriptor.hpp"
#include "fcd/eval.hpp"
#include "fcd/geometry.hpp"
#include "fcd/io.hpp"
#include "fcd/loss.hpp"
#include "fcd/matching.hpp"

namespace fcd::cli {

namespace {

// Calls fn(line, line_number) for every non-blank line.
template <typename Fn>
void visit_lines(std::istream& in, Fn&& fn) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, lineno);
  }
}

// Library errors raised while handling one record become input errors that
// name the offending line.
template <typename Fn>
void with_line(int lineno, Fn&& fn) {
  try {
    fn();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(lineno, e.what());
  }
}

int report_input_error(std::ostream& err, const Error& e) {
  err << "error: " << e.what() << "\n";
  return 2;
}

}  // namespace

int cmd_encode(std::istream& in, std::ostream& out, std::ostream& err,
               const Config& cfg) {
  try {
    visit_lines(in, [&](const std::string& line, int lineno) {
      const ContourRecord rec = parse_contour_record(line, lineno);
      with_line(lineno, [&] {
        for (size_t p = 0; p < rec.polygons.size(); ++p) {
          const Polygon poly{rec.polygons[p]};
          ContourPoints pts = resample_equidistant(poly, cfg.n_samples);
          pts = normalize(pts, rec.image);

          DescriptorRecord out_rec;
          out_rec.fd = dft_encode(pts, cfg.k_max);
          out_rec.image = rec.image;
          if (!rec.scores.empty()) out_rec.score = rec.scores[p];
          out << to_json(out_rec) << "\n";
        }
      });
    });
  } catch (const Error& e) {
    return report_input_error(err, e);
  }
  return 0;
}

int cmd_decode(std::istream& in, std::ostream& out, std::ostream& err,
               const Config& cfg) {
  try {
    visit_lines(in, [&](const std::string& line, int lineno) {
      const DescriptorRecord rec = parse_descriptor_record(line, lineno);
      with_line(lineno, [&] {
        const ContourPoints decoded = idft_decode(rec.fd, cfg.n_samples);

        ContourRecord out_rec;
        // Records without a source image stay in the unit frame.
        out_rec.image = rec.image.value_or(ImageSize{1, 1});
        out_rec.polygons.push_back(
            denormalize(decoded, out_rec.image).points);
        if (rec.score) out_rec.scores.push_back(*rec.score);
        out << to_json(out_rec) << "\n";
      });
    });
  } catch (const Error& e) {
    return report_input_error(err, e);
  }
  return 0;
}

int cmd_match(std::istream& pred, std::istream& gt, std::ostream& out,
              std::ostream& err, const Config& cfg) {
  try {
    std::vector<Proposal> proposals;
    visit_lines(pred, [&](const std::string& line, int lineno) {
      const DescriptorRecord rec = parse_descriptor_record(line, lineno);
      if (!rec.score) {
        throw InputError(lineno, "prediction record needs a \"score\"");
      }
      proposals.push_back({rec.fd, *rec.score});
    });

    std::vector<FourierDescriptor> targets;
    visit_lines(gt, [&](const std::string& line, int lineno) {
      targets.push_back(parse_descriptor_record(line, lineno).fd);
    });

    const Eigen::MatrixXd cost = build_cost_matrix(
        proposals, targets, cfg.lambda, cfg.alpha1, cfg.alpha2,
        cfg.n_samples);
    const MatchResult result = dense_match(cost, cfg.n_m);
    out << to_json(result) << "\n";

    if (cfg.explain) {
      out << "{\"rows\":" << cost.rows() << ",\"cols\":" << cost.cols()
          << ",\"rounds\":" << cfg.n_m << ",\"positive_costs\":[";
      for (size_t i = 0; i < result.positives.size(); ++i) {
        if (i) out << ",";
        out << format_double(cost(result.positives[i].first,
                                  result.positives[i].second));
      }
      out << "]}\n";
    }
  } catch (const Error& e) {
    return report_input_error(err, e);
  }
  return 0;
}

int cmd_nms(std::istream& in, std::ostream& out, std::ostream& err,
            const Config& cfg) {
  try {
    visit_lines(in, [&](const std::string& line, int lineno) {
      const ContourRecord rec = parse_contour_record(line, lineno);
      if (rec.scores.empty() && !rec.polygons.empty()) {
        throw InputError(lineno, "record needs \"scores\" to rank polygons");
      }
      with_line(lineno, [&] {
        std::vector<ContourPoints> contours;
        contours.reserve(rec.polygons.size());
        for (const PointMatrix& pts : rec.polygons) {
          contours.push_back({pts, Frame::kPixel});
        }
        const std::vector<int> kept =
            nms(contours, rec.scores, cfg.nms_iou);

        ContourRecord filtered;
        filtered.image = rec.image;
        for (int idx : kept) {
          filtered.polygons.push_back(rec.polygons[static_cast<size_t>(idx)]);
          filtered.scores.push_back(rec.scores[static_cast<size_t>(idx)]);
        }
        std::string js = to_json(filtered);
        if (cfg.explain) {
          js.pop_back();  // reopen the object to append the kept indices
          js += ",\"kept\":[";
          for (size_t i = 0; i < kept.size(); ++i) {
            if (i) js += ",";
            js += std::to_string(kept[i]);
          }
          js += "]}";
        }
        out << js << "\n";
      });
    });
  } catch (const Error& e) {
    return report_input_error(err, e);
  }
  return 0;
}

int cmd_eval(std::istream& pred, std::istream& gt, std::ostream& out,
             std::ostream& err, const Config& cfg) {
  try {
    std::vector<std::pair<std::string, int>> pred_lines, gt_lines;
    visit_lines(pred, [&](const std::string& line, int lineno) {
      pred_lines.emplace_back(line, lineno);
    });
    visit_lines(gt, [&](const std::string& line, int lineno) {
      gt_lines.emplace_back(line, lineno);
    });
    if (pred_lines.size() != gt_lines.size()) {
      throw Error("pred has " + std::to_string(pred_lines.size()) +
                  " records but gt has " + std::to_string(gt_lines.size()));
    }

    std::vector<DetectionCounts> per_image;
    for (size_t i = 0; i < gt_lines.size(); ++i) {
      const ContourRecord pr =
          parse_contour_record(pred_lines[i].first, pred_lines[i].second);
      const ContourRecord gr =
          parse_contour_record(gt_lines[i].first, gt_lines[i].second);

      std::vector<ScoredContour> detections;
      for (size_t p = 0; p < pr.polygons.size(); ++p) {
        const double score = pr.scores.empty() ? 1.0 : pr.scores[p];
        detections.push_back({{pr.polygons[p], Frame::kPixel}, score});
      }
      std::vector<ContourPoints> targets, ignored;
      for (size_t p = 0; p < gr.polygons.size(); ++p) {
        const bool skip = !gr.ignore.empty() && gr.ignore[p];
        (skip ? ignored : targets)
            .push_back({gr.polygons[p], Frame::kPixel});
      }
      per_image.push_back(
          match_detections(detections, targets, cfg.eval_iou, ignored));
    }

    const EvalReport report = aggregate(per_image);
    out << "{\"tp\":" << report.tp << ",\"fp\":" << report.fp
        << ",\"fn\":" << report.fn
        << ",\"precision\":" << format_double(report.precision)
        << ",\"recall\":" << format_double(report.recall)
        << ",\"f\":" << format_double(report.f_measure);
    if (cfg.explain) {
      out << ",\"per_image\":[";
      for (size_t i = 0; i < per_image.size(); ++i) {
        if (i) out << ",";
        out << "[" << per_image[i].tp << "," << per_image[i].fp << ","
            << per_image[i].fn << "]";
      }
      out << "]";
    }
    out << "}\n";
  } catch (const Error& e) {
    return report_input_error(err, e);
  }
  return 0;
}

int cmd_grad_check(std::ostream& out, std::ostream& err, const Config& cfg) {
  (void)err;
  const int trials = cfg.trials > 0 ? cfg.trials : 1000;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dc_dist(0.05, 0.95);
  std::uniform_real_distribution<double> scaled_dist(-0.9, 0.9);
  std::uniform_real_distribution<double> offset_dist(-1.0, 1.0);
  constexpr double kStep = 1e-6;

  double max_rel = 0.0;
  double max_rel_closed = 0.0;
  const Eigen::Index len = descriptor_length(cfg.k_max);
  const Eigen::Index dc = u_index(cfg.k_max, 0);
  for (int t = 0; t < trials; ++t) {
    FourierDescriptor fd;
    fd.k_max = cfg.k_max;
    fd.coeffs.resize(len);
    for (Eigen::Index i = 0; i < len; ++i) {
      fd.coeffs(i) = (i == dc || i == dc + 1)
                         ? dc_dist(rng)
                         : scaled_dist(rng) / cfg.delta;
    }
    Eigen::VectorXd offset(len);
    for (Eigen::Index i = 0; i < len; ++i) offset(i) = offset_dist(rng);

    // Analytic gradient against central differences at a random offset.
    const Eigen::VectorXd analytic = refine_gradient(fd, offset, cfg.delta);
    for (Eigen::Index i = 0; i < len; ++i) {
      Eigen::VectorXd lo = offset, hi = offset;
      lo(i) -= kStep;
      hi(i) += kStep;
      const double numeric = (refine(fd, hi, cfg.delta).coeffs(i) -
                              refine(fd, lo, cfg.delta).coeffs(i)) /
                             (2.0 * kStep);
      const double rel = std::abs(analytic(i) - numeric) /
                         std::max({std::abs(analytic(i)), std::abs(numeric),
                                   1.0});
      max_rel = std::max(max_rel, rel);
    }

    // At zero offset the gradient collapses to closed forms in the
    // coefficient alone: c(1-c) for dc, (1-(delta c)^2) atanh(delta c) /
    // delta otherwise.
    const Eigen::VectorXd at_zero =
        refine_gradient(fd, Eigen::VectorXd::Zero(len), cfg.delta);
    for (Eigen::Index i = 0; i < len; ++i) {
      const double c = fd.coeffs(i);
      const double expected =
          (i == dc || i == dc + 1)
              ? c * (1.0 - c)
              : (1.0 - (cfg.delta * c) * (cfg.delta * c)) *
                    std::atanh(cfg.delta * c) / cfg.delta;
      const double rel = std::abs(at_zero(i) - expected) /
                         std::max({std::abs(at_zero(i)), std::abs(expected),
                                   1.0});
      max_rel_closed = std::max(max_rel_closed, rel);
    }
  }

  const bool pass = max_rel < cfg.grad_tol && max_rel_closed < 1e-10;
  out << "{\"trials\":" << trials
      << ",\"max_rel_err\":" << format_double(max_rel)
      << ",\"closed_form_max_rel_err\":" << format_double(max_rel_closed)
      << ",\"tol\":" << format_double(cfg.grad_tol)
      << ",\"pass\":" << (pass ? "true" : "false") << "}\n";
  return pass ? 0 : 1;
}

namespace {

// Scalar-loop restatement of the attention kernel, kept deliberately naive:
// the checker must not share code with the implementation it verifies.
Eigen::VectorXd attn_reference(const FeaturePyramid& pyramid,
                               const AttentionSpec& spec, bool box_mode,
                               const Eigen::Vector2d& point,
                               const NormalizedBox& box) {
  const int channels = static_cast<int>(pyramid.levels[0].channels.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(channels);
  for (const HeadSpec& head : spec.heads) {
    const int inner = static_cast<int>(head.value_proj.rows());
    std::vector<double> acc(static_cast<size_t>(inner), 0.0);
    for (int l = 0; l < spec.levels; ++l) {
      const FeatureLevel& level = pyramid.levels[static_cast<size_t>(l)];
      const int h = static_cast<int>(level.channels[0].rows());
      const int w = static_cast<int>(level.channels[0].cols());
      for (int s = 0; s < spec.points_per_level; ++s) {
        const Eigen::Index idx =
            static_cast<Eigen::Index>(l) * spec.points_per_level + s;
        const double ux = box_mode
                              ? box.x + head.offsets(idx, 0) * box.w
                              : point.x() + head.offsets(idx, 0);
        const double uy = box_mode
                              ? box.y + head.offsets(idx, 1) * box.h
                              : point.y() + head.offsets(idx, 1);
        const double px = ux * w - 0.5;
        const double py = uy * h - 0.5;
        const int gx = static_cast<int>(std::floor(px));
        const int gy = static_cast<int>(std::floor(py));
        const double fx = px - gx;
        const double fy = py - gy;
        for (int ic = 0; ic < inner; ++ic) {
          double value = 0.0;
          for (int c = 0; c < channels; ++c) {
            double sample = 0.0;
            for (int dy = 0; dy <= 1; ++dy) {
              for (int dx = 0; dx <= 1; ++dx) {
                const int xx = gx + dx;
                const int yy = gy + dy;
                if (xx < 0 || xx >= w || yy < 0 || yy >= h) continue;
                sample += (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) *
                          level.channels[static_cast<size_t>(c)](yy, xx);
              }
            }
            value += head.value_proj(ic, c) * sample;
          }
          acc[static_cast<size_t>(ic)] += head.weights(idx) * value;
        }
      }
    }
    for (int c = 0; c < channels; ++c) {
      double value = 0.0;
      for (int ic = 0; ic < inner; ++ic) {
        value += head.output_proj(c, ic) * acc[static_cast<size_t>(ic)];
      }
      out(c) += value;
    }
  }
  return out;
}

}  // namespace

int cmd_attn_check(std::ostream& out, std::ostream& err, const Config& cfg) {
  (void)err;
  const int trials = cfg.trials > 0 ? cfg.trials : 100;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> level_dist(1, 3), head_dist(1, 3),
      point_dist(1, 3), chan_dist(1, 5), inner_dist(1, 4), size_dist(2, 7);
  std::uniform_real_distribution<double> feat(-1.0, 1.0), off(-0.3, 0.3),
      wpos(0.05, 1.0), loc(0.1, 0.9), box_size(0.1, 0.5),
      box_center(0.3, 0.7);

  double max_abs = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int levels = level_dist(rng);
    const int channels = chan_dist(rng);

    FeaturePyramid pyramid;
    for (int l = 0; l < levels; ++l) {
      FeatureLevel level;
      const int h = size_dist(rng), w = size_dist(rng);
      for (int c = 0; c < channels; ++c) {
        Eigen::MatrixXd plane(h, w);
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) plane(y, x) = feat(rng);
        }
        level.channels.push_back(plane);
      }
      pyramid.levels.push_back(level);
    }

    AttentionSpec spec;
    spec.levels = levels;
    spec.points_per_level = point_dist(rng);
    const int heads = head_dist(rng);
    const Eigen::Index samples =
        static_cast<Eigen::Index>(levels) * spec.points_per_level;
    for (int m = 0; m < heads; ++m) {
      HeadSpec head;
      const int inner = inner_dist(rng);
      head.offsets.resize(samples, 2);
      head.weights.resize(samples);
      for (Eigen::Index i = 0; i < samples; ++i) {
        head.offsets(i, 0) = off(rng);
        head.offsets(i, 1) = off(rng);
        head.weights(i) = wpos(rng);
      }
      head.weights /= head.weights.sum();
      head.value_proj.resize(inner, channels);
      head.output_proj.resize(channels, inner);
      for (int r = 0; r < inner; ++r) {
        for (int c = 0; c < channels; ++c) {
          head.value_proj(r, c) = feat(rng);
          head.output_proj(c, r) = feat(rng);
        }
      }
      spec.heads.push_back(head);
    }

    const bool box_mode = t % 2 == 1;
    const Eigen::Vector2d point(loc(rng), loc(rng));
    NormalizedBox box;
    box.x = box_center(rng);
    box.y = box_center(rng);
    box.w = box_size(rng);
    box.h = box_size(rng);

    const Eigen::VectorXd got =
        box_mode ? ms_deform_attn(pyramid, box, spec)
                 : ms_deform_attn(pyramid, point, spec);
    const Eigen::VectorXd expected =
        attn_reference(pyramid, spec, box_mode, point, box);
    max_abs =
        std::max(max_abs, (got - expected).cwiseAbs().maxCoeff());
  }

  // Identity configuration: one head, one level, one point, unit weight and
  // 1x1 projections; sampling dead-center on a pixel must reproduce its
  // value untouched.
  FeaturePyramid pyramid;
  FeatureLevel level;
  Eigen::MatrixXd plane(3, 4);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 4; ++x) plane(y, x) = feat(rng);
  }
  level.channels.push_back(plane);
  pyramid.levels.push_back(level);

  AttentionSpec spec;
  spec.levels = 1;
  spec.points_per_level = 1;
  HeadSpec head;
  head.offsets = Eigen::Matrix<double, 1, 2>::Zero();
  head.weights = Eigen::VectorXd::Ones(1);
  head.value_proj = Eigen::MatrixXd::Identity(1, 1);
  head.output_proj = Eigen::MatrixXd::Identity(1, 1);
  spec.heads.push_back(head);
  const Eigen::Vector2d center((2 + 0.5) / 4.0, (1 + 0.5) / 3.0);
  const Eigen::VectorXd identity_out = ms_deform_attn(pyramid, center, spec);
  const bool identity_exact = identity_out(0) == plane(1, 2);

  const bool pass = max_abs < cfg.attn_tol && identity_exact;
  out << "{\"trials\":" << trials
      << ",\"max_abs_err\":" << format_double(max_abs)
      << ",\"identity_exact\":" << (identity_exact ? "true" : "false")
      << ",\"tol\":" << format_double(cfg.attn_tol)
      << ",\"pass\":" << (pass ? "true" : "false") << "}\n";
  return pass ? 0 : 1;
}

}  // namespace fcd::cli
