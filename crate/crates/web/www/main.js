import init, { overlap_curve, evolution_curve, runtime_comparison } from "./pkg/qwalk_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

function rows(flat, width) {
  const out = [];
  for (let i = 0; i + width <= flat.length; i += width) out.push(flat.subarray(i, i + width));
  return out;
}

function legend(id, names) {
  document.getElementById(id).innerHTML = names
    .map((n, i) => `<span><i style="background:${COLORS[i % COLORS.length]}"></i>${n}</span>`)
    .join("");
}

// Draws series[j] against x; `logX` spaces the horizontal axis logarithmically.
function plot(canvasId, x, series, { logX = false, yMax = null, marks = [] } = {}) {
  const canvas = document.getElementById(canvasId);
  const ratio = window.devicePixelRatio || 1;
  canvas.width = canvas.clientWidth * ratio;
  canvas.height = canvas.clientHeight * ratio;
  const ctx = canvas.getContext("2d");
  ctx.scale(ratio, ratio);
  const w = canvas.clientWidth, h = canvas.clientHeight, pad = 40;

  const fx = logX ? Math.log10 : (v) => v;
  const x0 = fx(x[0]), x1 = fx(x[x.length - 1]);
  const finite = series.flat().filter(Number.isFinite);
  const top = yMax ?? Math.max(...finite);
  const px = (v) => pad + ((fx(v) - x0) / (x1 - x0)) * (w - 2 * pad);
  const py = (v) => h - pad - (v / top) * (h - 2 * pad);

  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  ctx.fillText(x[0].toPrecision(3), pad, h - pad + 14);
  ctx.fillText(x[x.length - 1].toPrecision(3), w - pad - 30, h - pad + 14);
  ctx.fillText(top.toPrecision(3), 2, pad + 4);
  ctx.fillText("0", 2, h - pad);

  for (const m of marks) {
    ctx.strokeStyle = "#bbb";
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(px(m), pad);
    ctx.lineTo(px(m), h - pad);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  series.forEach((ys, j) => {
    ctx.strokeStyle = COLORS[j % COLORS.length];
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    let pen = false;
    ys.forEach((y, i) => {
      if (!Number.isFinite(y)) { pen = false; return; }
      const X = px(x[i]), Y = py(Math.min(y, top));
      pen ? ctx.lineTo(X, Y) : ctx.moveTo(X, Y);
      pen = true;
    });
    ctx.stroke();
  });
}

function read() {
  const v = (id) => Number(document.getElementById(id).value);
  const gamma = document.getElementById("gamma").value;
  return {
    n1: v("n1"), n2: v("n2"), k1: v("k1"), k2: v("k2"),
    walk: document.getElementById("walk").value,
    gamma: gamma === "" ? 0 : Number(gamma),
  };
}

function update(event) {
  event?.preventDefault();
  const p = read();
  const error = document.getElementById("error");
  error.textContent = "";
  try {
    const ov = overlap_curve(p.n1, p.n2, p.k1, p.k2, p.walk, 300);
    const dim = ov[0];
    const ovRows = rows(ov.subarray(1), dim + 1);
    const gammas = ovRows.map((r) => r[0]);
    const ovSeries = [...Array(dim).keys()].map((i) => ovRows.map((r) => r[1 + i]));
    legend("overlap-legend", ovSeries.map((_, i) => `eigenstate ${i}`));
    plot("overlap", gammas, ovSeries, { logX: true, yMax: 1, marks: p.gamma > 0 ? [p.gamma] : [] });

    const ev = rows(evolution_curve(p.n1, p.n2, p.k1, p.k2, p.walk, p.gamma, 0, 600), 4);
    legend("evolve-legend", ["marked in V1", "marked in V2", "total"]);
    plot("evolve", ev.map((r) => r[0]), [1, 2, 3].map((j) => ev.map((r) => r[j])), { yMax: 1 });

    const larger = p.n1 >= p.n2;
    const cmp = runtime_comparison(p.n1, p.n2, larger ? p.k2 : p.k1, Math.min(60, Math.max(p.n1, p.n2)));
    const threshold = cmp[0];
    const cmpRows = rows(cmp.subarray(1), 4);
    legend("compare-legend", ["Laplacian (V1 resonance)", "Laplacian (V2 resonance)", "adjacency"]);
    plot("compare", cmpRows.map((r) => r[0]), [1, 2, 3].map((j) => cmpRows.map((r) => r[j])), {
      marks: Number.isFinite(threshold) ? [threshold] : [],
    });
  } catch (e) {
    error.textContent = String(e.message ?? e);
  }
}

await init();
document.getElementById("params").addEventListener("submit", update);
update();
