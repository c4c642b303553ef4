// Build the bindings first:
//   cargo build -p dkg-wasm-demo --target wasm32-unknown-unknown --release
//   wasm-bindgen --target web --out-dir crates/wasm-demo/www/pkg \
//     target/wasm32-unknown-unknown/release/dkg_wasm_demo.wasm
import init, { region, cone_profile, evolve_gaussian } from "./pkg/dkg_wasm_demo.js";

const $ = (id) => document.getElementById(id);

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(40, 10, w - 50, h - 40);
}

// Draws each series of [x, y] points into the canvas, sharing one scale.
function plot(canvas, series, { logx = false, logy = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  axes(ctx, w, h);
  const tx = (x) => (logx ? Math.log10(x) : x);
  const ty = (y) => (logy ? Math.log10(y) : y);
  const pts = series.flatMap((s) => s.points).filter(([x, y]) => isFinite(tx(x)) && isFinite(ty(y)));
  if (pts.length === 0) return;
  let [x0, x1] = [Math.min(...pts.map((p) => tx(p[0]))), Math.max(...pts.map((p) => tx(p[0])))];
  let [y0, y1] = [Math.min(...pts.map((p) => ty(p[1]))), Math.max(...pts.map((p) => ty(p[1])))];
  if (x1 === x0) x1 = x0 + 1;
  if (y1 === y0) { y0 -= 1e-9 + Math.abs(y0) * 1e-6; y1 += 1e-9 + Math.abs(y1) * 1e-6; }
  const X = (x) => 40 + ((tx(x) - x0) / (x1 - x0)) * (w - 50);
  const Y = (y) => 10 + (1 - (ty(y) - y0) / (y1 - y0)) * (h - 40);
  ctx.font = "11px sans-serif";
  ctx.fillStyle = "#444";
  ctx.fillText((logy ? "1e" : "") + y1.toPrecision(4), 2, 18);
  ctx.fillText((logy ? "1e" : "") + y0.toPrecision(4), 2, h - 32);
  ctx.fillText((logx ? "1e" : "") + x0.toPrecision(3), 40, h - 16);
  ctx.fillText((logx ? "1e" : "") + x1.toPrecision(3), w - 60, h - 16);
  series.forEach((s, i) => {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.points.forEach(([x, y], j) => (j ? ctx.lineTo(X(x), Y(y)) : ctx.moveTo(X(x), Y(y))));
    ctx.stroke();
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, w - 200, 24 + 14 * i);
  });
}

function guard(out, f) {
  try {
    f();
  } catch (e) {
    out.textContent = "error: " + e;
  }
}

function runRegion() {
  const out = $("region-out");
  guard(out, () => {
    const v = JSON.parse(region($("r").value, $("delta").value, $("variant").value, 200));
    out.textContent =
      `(s, l) = (${v.pair.s}, ${v.pair.l}) ≈ (${v.pair.s_f64.toFixed(6)}, ${v.pair.l_f64.toFixed(6)})` +
      (v.r2_region === null ? "" : `\nr = 2 product region: ${v.r2_region ? "inside" : "outside"}`);
    const colors = { minimal_s: ["#c33", "#e99"], minimal_l: ["#33c", "#99e"] };
    plot(
      $("region-plot"),
      v.curves.flatMap((c) => [
        { label: `s₀(r) ${c.variant}`, color: colors[c.variant][0], points: c.points.map((p) => [p[0], p[1]]) },
        { label: `l₀(r) ${c.variant}`, color: colors[c.variant][1], points: c.points.map((p) => [p[0], p[2]]) },
      ]),
    );
  });
}

function runCone() {
  const out = $("cone-out");
  guard(out, () => {
    const v = JSON.parse(cone_profile($("branch").value, Number($("cone-r").value), Number($("gap").value)));
    out.textContent =
      `weights (${v.weights.map((x) => x.toFixed(4)).join(", ")})\n` +
      `fit A = ${v.fit.a.toFixed(4)} (expected ${v.expected.a.toFixed(4)}), ` +
      `B = ${v.fit.b.toFixed(4)} (expected ${v.expected.b.toFixed(4)})`;
    plot($("cone-plot"), [{ label: "integral vs |ξ|", color: "#083", points: v.profile }], { logx: true, logy: true });
  });
}

function runEvolve() {
  const out = $("evolve-out");
  guard(out, () => {
    const v = JSON.parse(
      evolve_gaussian(
        Number($("n").value),
        Number($("amp").value),
        Number($("dt").value),
        Number($("steps").value),
        Number($("coupling").value),
      ),
    );
    const q = v.charge.map((p) => p[1]);
    const drift = Math.max(...q.map((x) => Math.abs(x - q[0])));
    out.textContent = `final t = ${v.charge.at(-1)[0].toFixed(4)}, charge ${q[0].toExponential(6)}, max drift ${drift.toExponential(2)}`;
    plot($("charge-plot"), [{ label: "charge", color: "#a50", points: v.charge }]);
    const canvas = $("density");
    const ctx = canvas.getContext("2d");
    const cell = canvas.width / v.n;
    const top = Math.max(...v.density) || 1;
    v.density.forEach((d, i) => {
      const [row, col] = [Math.floor(i / v.n), i % v.n];
      const g = Math.round(255 * (1 - d / top));
      ctx.fillStyle = `rgb(${g}, ${g}, 255)`;
      ctx.fillRect(col * cell, row * cell, cell + 1, cell + 1);
    });
  });
}

await init();
$("region-go").onclick = runRegion;
$("cone-go").onclick = runCone;
$("evolve-go").onclick = runEvolve;
runRegion();
