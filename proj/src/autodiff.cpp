#include "cornertrack/autodiff.hpp"

#include <cmath>

#include "cornertrack/corner_pooling.hpp"
#include "cornertrack/correlation.hpp"
#include "cornertrack/errors.hpp"
#include "cornertrack/targets_losses.hpp"

namespace cornertrack {

Tape::NodeId Tape::push(Tensor value, std::function<void(Tape&, const Tensor&)> backprop) {
    nodes_.push_back(Node{std::move(value), false, std::move(backprop)});
    return static_cast<NodeId>(nodes_.size()) - 1;
}

Tape::NodeId Tape::constant(Tensor value) { return push(std::move(value), nullptr); }

Tape::NodeId Tape::parameter(Tensor value) {
    const NodeId id = push(std::move(value), nullptr);
    nodes_[id].param = true;
    return id;
}

const Tensor& Tape::value(NodeId id) const { return nodes_.at(id).value; }

bool Tape::is_parameter(NodeId id) const { return nodes_.at(id).param; }

void Tape::accumulate(NodeId id, const Tensor& grad) {
    Tensor& slot = grads_[id];
    if (slot.empty()) {
        slot = grad;
    } else {
        for (std::size_t i = 0; i < slot.size(); ++i) slot.data()[i] += grad.data()[i];
    }
}

Tape::NodeId Tape::conv2d(NodeId input, NodeId kernel, NodeId bias, int stride, int padding) {
    const Tensor& x = value(input);
    const Tensor& k = value(kernel);
    const Tensor& b = value(bias);
    Tensor out = cornertrack::conv2d(x, k, b.data(), stride, padding);
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        const Tensor& xv = t.value(input);
        const Tensor& kv = t.value(kernel);
        Tensor gx(xv.batch(), xv.channels(), xv.height(), xv.width());
        Tensor gk(kv.batch(), kv.channels(), kv.height(), kv.width());
        Tensor gb(1, 1, 1, kv.batch());
        for (int bb = 0; bb < xv.batch(); ++bb) {
            for (int oc = 0; oc < kv.batch(); ++oc) {
                for (int oy = 0; oy < g.height(); ++oy) {
                    for (int ox = 0; ox < g.width(); ++ox) {
                        const double go = g.at(bb, oc, oy, ox);
                        if (go == 0.0) continue;
                        gb.at(0, 0, 0, oc) += go;
                        const int y0 = oy * stride - padding;
                        const int x0 = ox * stride - padding;
                        for (int ic = 0; ic < xv.channels(); ++ic) {
                            for (int ky = 0; ky < kv.height(); ++ky) {
                                const int iy = y0 + ky;
                                if (iy < 0 || iy >= xv.height()) continue;
                                for (int kx = 0; kx < kv.width(); ++kx) {
                                    const int ix = x0 + kx;
                                    if (ix < 0 || ix >= xv.width()) continue;
                                    gx.at(bb, ic, iy, ix) += go * kv.at(oc, ic, ky, kx);
                                    gk.at(oc, ic, ky, kx) += go * xv.at(bb, ic, iy, ix);
                                }
                            }
                        }
                    }
                }
            }
        }
        t.accumulate(input, gx);
        t.accumulate(kernel, gk);
        t.accumulate(bias, gb);
    });
}

Tape::NodeId Tape::relu(NodeId input) {
    Tensor out = cornertrack::relu(value(input));
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        const Tensor& xv = t.value(input);
        Tensor gx = g;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            if (xv.data()[i] <= 0.0) gx.data()[i] = 0.0;  // subgradient 0 at the kink
        }
        t.accumulate(input, gx);
    });
}

Tape::NodeId Tape::sigmoid(NodeId input) {
    Tensor out = cornertrack::sigmoid(value(input));
    const NodeId id = push(std::move(out), nullptr);
    nodes_[id].backprop = [=](Tape& t, const Tensor& g) {
        const Tensor& y = t.value(id);
        Tensor gx = g;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double s = y.data()[i];
            gx.data()[i] *= s * (1.0 - s);
        }
        t.accumulate(input, gx);
    };
    return id;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
    Tensor out = cornertrack::add(value(a), value(b));
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        t.accumulate(a, g);
        t.accumulate(b, g);
    });
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
    Tensor out = cornertrack::mul(value(a), value(b));
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        Tensor ga = g;
        Tensor gb = g;
        const Tensor& av = t.value(a);
        const Tensor& bv = t.value(b);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga.data()[i] *= bv.data()[i];
            gb.data()[i] *= av.data()[i];
        }
        t.accumulate(a, ga);
        t.accumulate(b, gb);
    });
}

Tape::NodeId Tape::scale(NodeId a, double factor) {
    Tensor out = cornertrack::scale(value(a), factor);
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        t.accumulate(a, cornertrack::scale(g, factor));
    });
}

Tape::NodeId Tape::sum(NodeId a) {
    Tensor out(1, 1, 1, 1);
    out.at(0, 0, 0, 0) = cornertrack::sum(value(a));
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        const Tensor& av = t.value(a);
        Tensor ga(av.batch(), av.channels(), av.height(), av.width(), g.at(0, 0, 0, 0));
        t.accumulate(a, ga);
    });
}

Tape::NodeId Tape::record_pooling(NodeId input, int direction) {
    std::vector<std::size_t> argmax;
    const Tensor& x = value(input);
    Tensor out;
    switch (direction) {
        case 0: out = pool_prefix_max_w_with_arg(x, argmax); break;
        case 1: out = pool_prefix_max_h_with_arg(x, argmax); break;
        case 2: out = pool_suffix_max_w_with_arg(x, argmax); break;
        default: out = pool_suffix_max_h_with_arg(x, argmax); break;
    }
    return push(std::move(out), [input, argmax = std::move(argmax)](Tape& t, const Tensor& g) {
        const Tensor& xv = t.value(input);
        Tensor gx(xv.batch(), xv.channels(), xv.height(), xv.width());
        for (std::size_t i = 0; i < g.size(); ++i) {
            gx.data()[argmax[i]] += g.data()[i];
        }
        t.accumulate(input, gx);
    });
}

Tape::NodeId Tape::prefix_max_w(NodeId input) { return record_pooling(input, 0); }
Tape::NodeId Tape::prefix_max_h(NodeId input) { return record_pooling(input, 1); }
Tape::NodeId Tape::suffix_max_w(NodeId input) { return record_pooling(input, 2); }
Tape::NodeId Tape::suffix_max_h(NodeId input) { return record_pooling(input, 3); }

Tape::NodeId Tape::depthwise_correlate(NodeId templ, NodeId search) {
    Tensor out = cornertrack::depthwise_correlate(value(templ), value(search));
    return push(std::move(out), [=](Tape& t, const Tensor& g) {
        const Tensor& tv = t.value(templ);
        const Tensor& sv = t.value(search);
        Tensor gt(tv.batch(), tv.channels(), tv.height(), tv.width());
        Tensor gs(sv.batch(), sv.channels(), sv.height(), sv.width());
        for (int b = 0; b < sv.batch(); ++b) {
            for (int c = 0; c < sv.channels(); ++c) {
                for (int oy = 0; oy < g.height(); ++oy) {
                    for (int ox = 0; ox < g.width(); ++ox) {
                        const double go = g.at(b, c, oy, ox);
                        if (go == 0.0) continue;
                        for (int ky = 0; ky < tv.height(); ++ky) {
                            for (int kx = 0; kx < tv.width(); ++kx) {
                                gs.at(b, c, oy + ky, ox + kx) += go * tv.at(b, c, ky, kx);
                                gt.at(b, c, ky, kx) += go * sv.at(b, c, oy + ky, ox + kx);
                            }
                        }
                    }
                }
            }
        }
        t.accumulate(templ, gt);
        t.accumulate(search, gs);
    });
}

Tape::NodeId Tape::focal_loss(NodeId pred, const Tensor& target, double alpha, double beta,
                              int k) {
    LossWeights w;
    w.alpha = alpha;
    w.beta = beta;
    Tensor out(1, 1, 1, 1);
    out.at(0, 0, 0, 0) = cornertrack::focal_loss(value(pred), target, w, k);
    return push(std::move(out), [pred, target, w, k](Tape& t, const Tensor& g) {
        Tensor gx = focal_loss_grad(t.value(pred), target, w, k);
        const double go = g.at(0, 0, 0, 0);
        for (double& v : gx.data()) v *= go;
        t.accumulate(pred, gx);
    });
}

Tape::NodeId Tape::focal_loss_logits(NodeId logits, const Tensor& target, double alpha,
                                     double beta, int k) {
    LossWeights w;
    w.alpha = alpha;
    w.beta = beta;
    Tensor out(1, 1, 1, 1);
    out.at(0, 0, 0, 0) = cornertrack::focal_loss_logits(value(logits), target, w, k);
    return push(std::move(out), [logits, target, w, k](Tape& t, const Tensor& g) {
        Tensor gx = focal_loss_logits_grad(t.value(logits), target, w, k);
        const double go = g.at(0, 0, 0, 0);
        for (double& v : gx.data()) v *= go;
        t.accumulate(logits, gx);
    });
}

Tape::NodeId Tape::offset_loss(NodeId offset_map, const std::vector<std::pair<int, int>>& cells,
                               const std::vector<std::array<double, 2>>& targets) {
    if (cells.size() != targets.size() || cells.empty()) {
        throw ContractError("Tape::offset_loss: cells and targets must match and be non-empty");
    }
    const Tensor& map = value(offset_map);
    if (map.channels() < 2) {
        throw ShapeError("Tape::offset_loss: offset map needs 2 channels, got " +
                         map.shape_str());
    }
    for (const auto& [x, y] : cells) {
        if (x < 0 || y < 0 || x >= map.width() || y >= map.height()) {
            throw ContractError("Tape::offset_loss: cell (" + std::to_string(x) + "," +
                                std::to_string(y) + ") outside map " + map.shape_str());
        }
    }
    std::vector<std::array<double, 2>> pred(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        pred[i] = {map.at(0, 0, cells[i].second, cells[i].first),
                   map.at(0, 1, cells[i].second, cells[i].first)};
    }
    const int k = static_cast<int>(cells.size());
    Tensor out(1, 1, 1, 1);
    out.at(0, 0, 0, 0) = cornertrack::offset_loss(pred, targets, k);
    return push(std::move(out), [offset_map, cells, targets, pred, k](Tape& t, const Tensor& g) {
        const Tensor& map_v = t.value(offset_map);
        Tensor gx(map_v.batch(), map_v.channels(), map_v.height(), map_v.width());
        const double go = g.at(0, 0, 0, 0) / k;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            for (int c = 0; c < 2; ++c) {
                const double x = pred[i][c] - targets[i][c];
                const double dsmooth = std::fabs(x) < 1.0 ? x : (x > 0.0 ? 1.0 : -1.0);
                gx.at(0, c, cells[i].second, cells[i].first) += go * dsmooth;
            }
        }
        t.accumulate(offset_map, gx);
    });
}

std::unordered_map<Tape::NodeId, Tensor> Tape::backward(NodeId loss) {
    const Tensor& lv = value(loss);
    if (lv.size() != 1) {
        throw ContractError("backward: loss node must be scalar, has shape " + lv.shape_str());
    }
    grads_.assign(nodes_.size(), Tensor());
    grads_[loss] = Tensor(1, 1, 1, 1, 1.0);
    for (NodeId id = loss; id >= 0; --id) {
        if (grads_[id].empty() || !nodes_[id].backprop) continue;
        nodes_[id].backprop(*this, grads_[id]);
    }
    std::unordered_map<NodeId, Tensor> out;
    for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
        if (!nodes_[id].param) continue;
        if (grads_[id].empty()) {
            const Tensor& v = nodes_[id].value;
            out[id] = Tensor(v.batch(), v.channels(), v.height(), v.width());
        } else {
            out[id] = std::move(grads_[id]);
        }
    }
    grads_.clear();
    return out;
}

GradientReport grad_check(const std::function<double(const Tensor&)>& f,
                          const Tensor& analytic_grad, const Tensor& point, double step) {
    if (step <= 0.0) {
        throw ContractError("grad_check: step must be positive");
    }
    if (!analytic_grad.same_shape(point)) {
        throw ShapeError("grad_check: gradient shape " + analytic_grad.shape_str() +
                         " differs from point " + point.shape_str());
    }
    GradientReport report;
    Tensor probe = point;
    for (std::size_t i = 0; i < probe.size(); ++i) {
        const double original = probe.data()[i];
        probe.data()[i] = original + step;
        const double fp = f(probe);
        probe.data()[i] = original - step;
        const double fm = f(probe);
        probe.data()[i] = original;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericError("grad_check: non-finite function value at coordinate " +
                               std::to_string(i));
        }
        const double numeric = (fp - fm) / (2.0 * step);
        const double analytic = analytic_grad.data()[i];
        const double abs_err = std::fabs(analytic - numeric);
        // The 1e-4 denominator floor turns the check absolute on coordinates
        // where both gradients vanish; the difference quotient's own rounding
        // noise would otherwise dominate a ratio of near-zero numbers.
        const double rel_err =
            abs_err / std::max(std::fabs(analytic) + std::fabs(numeric), 1e-4);
        report.max_abs_err = std::max(report.max_abs_err, abs_err);
        if (rel_err > report.max_rel_err) {
            report.max_rel_err = rel_err;
            report.worst_index = i;
        }
    }
    return report;
}

GradientReport grad_check(const TapeProgram& program, const Tensor& point, double step) {
    Tape tape;
    const auto x = tape.parameter(point);
    const auto loss = program(tape, x);
    auto grads = tape.backward(loss);
    const auto f = [&program](const Tensor& p) {
        Tape t;
        const auto xx = t.parameter(p);
        return t.value(program(t, xx)).at(0, 0, 0, 0);
    };
    return grad_check(f, grads.at(x), point, step);
}

void SgdMomentum::step(const std::vector<Tensor*>& params,
                       const std::vector<const Tensor*>& grads) {
    if (params.size() != grads.size()) {
        throw ContractError("SgdMomentum::step: parameter/gradient count mismatch");
    }
    if (velocity_.empty()) {
        velocity_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            const Tensor& p = *params[i];
            velocity_[i] = Tensor(p.batch(), p.channels(), p.height(), p.width());
        }
    }
    if (velocity_.size() != params.size()) {
        throw ContractError("SgdMomentum::step: parameter count changed between steps");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& v = velocity_[i];
        Tensor& p = *params[i];
        const Tensor& g = *grads[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            v.data()[j] = momentum_ * v.data()[j] - step_size_ * g.data()[j];
            p.data()[j] += v.data()[j];
        }
    }
}

}  // namespace cornertrack
