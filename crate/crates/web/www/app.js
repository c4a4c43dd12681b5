import init, { hanoi_board, board_probability, sierpinski_view, fairness_curve } from "./pkg/hanoi_web.js";

const $ = (id) => document.getElementById(id);
const PAD = 24;
const PATH_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
                     "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939"];

function showError(e) {
  $("error").textContent = String(e);
}

// Maps unit-triangle coordinates onto a canvas, y pointing up.
function projector(canvas) {
  const w = canvas.width - 2 * PAD, h = canvas.height - 2 * PAD;
  const s = Math.min(w, h / 0.866);
  const ox = PAD + (w - s) / 2;
  return ([x, y]) => [ox + x * s, canvas.height - PAD - y * s];
}

const board = { disks: 3, data: null, removed: new Set() };

function drawBoard() {
  const canvas = $("board"), ctx = canvas.getContext("2d");
  const at = projector(canvas);
  const pts = board.data.positions.map(at);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  for (const [u, v] of board.data.edges) {
    ctx.moveTo(...pts[u]);
    ctx.lineTo(...pts[v]);
  }
  ctx.stroke();
  const r = Math.max(2, 9 - board.disks);
  pts.forEach((p, v) => {
    ctx.fillStyle = board.removed.has(v) ? "#d62728" : "#1f77b4";
    ctx.beginPath();
    ctx.arc(p[0], p[1], board.removed.has(v) ? r + 2 : r, 0, 2 * Math.PI);
    ctx.fill();
  });
  const report = JSON.parse(board_probability(board.disks, Uint32Array.from(board.removed)));
  const labels = [...board.removed].sort((a, b) => a - b).map((v) => board.data.labels[v]);
  $("board-report").textContent =
    `forbidden: ${labels.join(" ") || "none"}\n` +
    `components: ${report.component_sizes.join(", ")}\n` +
    `P(connected) = ${report.probability_num}/${report.probability_den} = ${report.probability}` +
    (report.passes ? "  (at most 1/2)" : "");
}

function loadBoard() {
  board.disks = Number($("board-disks").value);
  $("board-disks-out").textContent = board.disks;
  board.data = JSON.parse(hanoi_board(board.disks));
  board.removed = new Set();
  drawBoard();
}

function boardClick(ev) {
  const canvas = $("board");
  const rect = canvas.getBoundingClientRect();
  const x = (ev.clientX - rect.left) * canvas.width / rect.width;
  const y = (ev.clientY - rect.top) * canvas.height / rect.height;
  const at = projector(canvas);
  let best = -1, bestD = Infinity;
  board.data.positions.forEach((p, v) => {
    const [px, py] = at(p);
    const d = (px - x) ** 2 + (py - y) ** 2;
    if (d < bestD) { bestD = d; best = v; }
  });
  if (best < 0 || bestD > 400) return;
  if (board.removed.has(best)) board.removed.delete(best); else board.removed.add(best);
  drawBoard();
}

function preset(name) {
  board.removed = new Set(name ? board.data.presets[name] : []);
  drawBoard();
}

function drawSierpinski() {
  const level = Number($("sier-level").value);
  $("sier-level-out").textContent = level;
  const view = JSON.parse(sierpinski_view(level, $("sier-overlay").checked));
  const canvas = $("sierpinski"), ctx = canvas.getContext("2d");
  const at = projector(canvas);
  const pts = view.positions.map(at);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.lineWidth = 1;
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  for (const [u, v] of view.edges) {
    ctx.moveTo(...pts[u]);
    ctx.lineTo(...pts[v]);
  }
  ctx.stroke();
  if (!view.witness) return;
  ctx.lineWidth = 3;
  view.witness.paths.forEach((path, i) => {
    ctx.strokeStyle = PATH_COLORS[i % PATH_COLORS.length];
    ctx.beginPath();
    ctx.moveTo(...pts[path[0]]);
    for (const v of path.slice(1)) ctx.lineTo(...pts[v]);
    ctx.stroke();
  });
  ctx.fillStyle = "#000";
  for (const b of view.witness.branch) {
    ctx.beginPath();
    ctx.arc(pts[b][0], pts[b][1], 6, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawCurve() {
  const max = Math.min(10, Math.max(1, Number($("curve-max").value) || 1));
  const curve = JSON.parse(fairness_curve(max));
  const canvas = $("curve"), ctx = canvas.getContext("2d");
  const w = canvas.width - 2 * PAD, h = canvas.height - 2 * PAD;
  const X = (n) => PAD + (max === 1 ? w / 2 : (n - 1) / (max - 1) * w);
  const Y = (p) => canvas.height - PAD - p * h;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#ccc";
  ctx.strokeRect(PAD, PAD, w, h);
  ctx.fillStyle = "#444";
  ctx.fillText("1", 4, Y(1) + 4);
  ctx.fillText("0", 4, Y(0) + 4);
  const series = [["two_state", "#1f77b4"], ["three_state", "#d62728"]];
  for (const [key, color] of series) {
    ctx.setLineDash([4, 4]);
    ctx.strokeStyle = color;
    ctx.beginPath();
    ctx.moveTo(PAD, Y(curve.limits[key]));
    ctx.lineTo(PAD + w, Y(curve.limits[key]));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.beginPath();
    curve.points.forEach((pt, i) => {
      const [x, y] = [X(pt.n), Y(pt[key].value)];
      if (i === 0) ctx.moveTo(x, y); else ctx.lineTo(x, y);
    });
    ctx.stroke();
    ctx.fillStyle = color;
    for (const pt of curve.points) {
      ctx.beginPath();
      ctx.arc(X(pt.n), Y(pt[key].value), 3, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  ctx.fillStyle = "#444";
  curve.points.forEach((pt) => ctx.fillText(String(pt.n), X(pt.n) - 3, canvas.height - 6));
  ctx.fillStyle = "#1f77b4";
  ctx.fillText("two-state (limit 5/9)", PAD + 8, PAD + 14);
  ctx.fillStyle = "#d62728";
  ctx.fillText("three-state (limit 1/3)", PAD + 8, PAD + 28);
}

function guarded(f) {
  return (...args) => {
    try {
      $("error").textContent = "";
      f(...args);
    } catch (e) {
      showError(e);
    }
  };
}

await init();
$("board-disks").addEventListener("input", guarded(loadBoard));
$("board").addEventListener("click", guarded(boardClick));
$("preset-two").addEventListener("click", guarded(() => preset("two_state")));
$("preset-three").addEventListener("click", guarded(() => preset("three_state")));
$("preset-clear").addEventListener("click", guarded(() => preset(null)));
$("sier-level").addEventListener("input", guarded(drawSierpinski));
$("sier-overlay").addEventListener("change", guarded(drawSierpinski));
$("curve-max").addEventListener("change", guarded(drawCurve));
guarded(loadBoard)();
guarded(drawSierpinski)();
guarded(drawCurve)();
