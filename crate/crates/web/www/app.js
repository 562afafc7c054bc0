// Build first: see the README ("Browser demo") for the wasm-bindgen step
// that produces ./pkg/wetbeam_web.js.
import init, { solve_scenario, rotation_curve, beam_pattern } from "./pkg/wetbeam_web.js";

const $ = (id) => document.getElementById(id);
const LP = "#1f6fd1";
const SDP = "#d1571f";

function params() {
  return {
    scenario: $("scenario").value,
    antennas: Math.max(1, Math.min(64, parseInt($("antennas").value, 10) || 8)),
    kappa: parseFloat($("kappa").value),
    rotation: parseFloat($("rotation").value),
  };
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
}

function line(ctx, xs, ys, color, map) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  xs.forEach((x, i) => {
    const [px, py] = map(x, ys[i]);
    if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

function drawLayout(sol) {
  const c = $("layout"), ctx = c.getContext("2d");
  const w = c.width, h = c.height;
  ctx.clearRect(0, 0, w, h);
  const ox = w / 2, oy = h - 20;
  const r = Math.max(...sol.devices.map((d) => d.distance)) * 1.1;
  const s = Math.min(w / 2, h - 40) / r;
  ctx.fillStyle = "#333";
  ctx.fillRect(ox - 20, oy - 3, 40, 6); // the array
  const e = sol.lp_energy, q = sol.sdp_energy;
  const emax = Math.max(...e, ...q);
  sol.devices.forEach((d, i) => {
    const x = ox + d.x * s, y = oy - d.y * s;
    ctx.strokeStyle = "#ccc";
    ctx.beginPath(); ctx.moveTo(ox, oy); ctx.lineTo(x, y); ctx.stroke();
    ctx.fillStyle = LP;
    ctx.fillRect(x - 9, y - 30 * e[i] / emax, 8, 30 * e[i] / emax);
    ctx.fillStyle = SDP;
    ctx.fillRect(x + 1, y - 30 * q[i] / emax, 8, 30 * q[i] / emax);
    ctx.fillStyle = "#000";
    ctx.beginPath(); ctx.arc(x, y, 3, 0, 2 * Math.PI); ctx.fill();
    ctx.fillText(String(i + 1), x + 11, y + 4);
  });
}

function drawPattern(p) {
  const c = $("pattern"), ctx = c.getContext("2d");
  const w = c.width, h = c.height, pad = 30;
  axes(ctx, w, h, pad);
  const top = Math.max(...p.lp, ...p.sdp);
  const map = (a, v) => [pad + (a + 90) / 180 * (w - 2 * pad), h - pad - v / top * (h - 2 * pad)];
  ctx.strokeStyle = "#eee";
  p.device_azimuth_deg.forEach((a) => {
    const wrapped = ((a + 90) % 360 + 360) % 360 - 90; // to [-90, 270)
    if (wrapped <= 90) {
      const [x] = map(wrapped, 0);
      ctx.beginPath(); ctx.moveTo(x, pad); ctx.lineTo(x, h - pad); ctx.stroke();
    }
  });
  line(ctx, p.angle_deg, p.lp, LP, map);
  line(ctx, p.angle_deg, p.sdp, SDP, map);
  ctx.fillStyle = "#444";
  ctx.fillText("-90°", pad - 10, h - 10);
  ctx.fillText("90°", w - pad - 10, h - 10);
}

function drawCurve(cv) {
  const c = $("curve"), ctx = c.getContext("2d");
  const w = c.width, h = c.height, pad = 34;
  axes(ctx, w, h, pad);
  const all = [...cv.lp_db, ...cv.sdp_db];
  const lo = Math.min(...all), hi = Math.max(...all);
  const map = (a, v) => [pad + a / 360 * (w - 2 * pad), h - pad - (v - lo) / (hi - lo || 1) * (h - 2 * pad)];
  line(ctx, cv.alpha_deg, cv.lp_db, LP, map);
  line(ctx, cv.alpha_deg, cv.sdp_db, SDP, map);
  ctx.fillStyle = "#444";
  ctx.fillText(`${hi.toFixed(1)} dB`, 2, pad);
  ctx.fillText(`${lo.toFixed(1)} dB`, 2, h - pad);
  ctx.fillText(`LP spread ${cv.spread_db.toFixed(2)} dB`, w - 150, pad - 10);
}

function update() {
  const p = params();
  $("kappa-v").textContent = p.kappa;
  $("rotation-v").textContent = p.rotation;
  try {
    const sol = JSON.parse(solve_scenario(p.scenario, p.antennas, p.kappa, p.rotation));
    drawLayout(sol);
    drawPattern(JSON.parse(beam_pattern(p.scenario, p.antennas, p.kappa, p.rotation, 361)));
    $("summary").textContent = [
      `p        = [${sol.powers.map((v) => v.toFixed(4)).join(", ")}]`,
      `xi_bar   = ${sol.xi_bar.toExponential(4)} (${sol.xi_bar_db.toFixed(2)} dB), tau = ${sol.iterations}`,
      `xi_sdp   = ${sol.sdp_xi.toExponential(4)} (${sol.sdp_xi_db.toFixed(2)} dB), rank ${sol.sdp_rank}`,
      `bounds   = [${sol.bound_lower.toExponential(3)}, ${sol.bound_upper.toExponential(3)}]`,
    ].join("\n");
    $("error").textContent = "";
  } catch (e) {
    $("error").textContent = String(e);
  }
}

function sweep() {
  const p = params();
  try {
    drawCurve(JSON.parse(rotation_curve(p.scenario, p.antennas, p.kappa, 2)));
    $("error").textContent = "";
  } catch (e) {
    $("error").textContent = String(e);
  }
}

await init();
for (const id of ["scenario", "antennas", "kappa", "rotation"]) $(id).addEventListener("input", update);
$("curve-btn").addEventListener("click", sweep);
update();
sweep();
