/** SVG rendering of plot artifacts: log-log main axes with error bars plus
 * a linear strip for normalized residuals. */

import type { PlotArtifact, PlotSeries } from "./api.js";

const WIDTH = 560;
const MAIN_HEIGHT = 330;
const STRIP_HEIGHT = 96;
const MARGIN = 46;

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function logFraction(value: number, lo: number, hi: number): number {
  const span = Math.log10(hi) - Math.log10(lo) || 1;
  return (Math.log10(value) - Math.log10(lo)) / span;
}

export function renderPlotSvg(artifact: PlotArtifact): string {
  const main = artifact.series.filter((s) => s.kind !== "residuals");
  const strips = artifact.series.filter((s) => s.kind === "residuals");
  const xs = main.flatMap((s) => s.x.filter((v) => v > 0));
  const ys = main.flatMap((s) => s.y.filter((v) => v > 0));
  const xLo = xs.length ? Math.min(...xs) : 1e-3;
  const xHi = xs.length ? Math.max(...xs) : 1;
  let yLo = ys.length ? Math.min(...ys) : 1e-3;
  let yHi = ys.length ? Math.max(...ys) : 1;
  if (yLo === yHi) yHi = yLo * 10;

  const plotW = WIDTH - 2 * MARGIN;
  const plotH = MAIN_HEIGHT - 2 * MARGIN;
  const totalH = MAIN_HEIGHT + (strips.length ? STRIP_HEIGHT : 0);
  const px = (f: number) => MARGIN + f * plotW;
  const py = (f: number) => MARGIN + plotH - f * plotH;

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${totalH}" ` +
      `width="${WIDTH}" height="${totalH}" role="img">`,
    `<rect width="${WIDTH}" height="${totalH}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="18" text-anchor="middle" font-size="13">` +
      `${escapeXml(artifact.title)}</text>`,
    `<rect x="${MARGIN}" y="${MARGIN}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333"/>`,
    `<text x="${WIDTH / 2}" y="${MARGIN + plotH + 30}" text-anchor="middle" ` +
      `font-size="11">${escapeXml(artifact.x_label)}</text>`,
    `<text x="12" y="${MARGIN + plotH / 2}" font-size="11" text-anchor="middle" ` +
      `transform="rotate(-90 12 ${MARGIN + plotH / 2})">` +
      `${escapeXml(artifact.y_label)}</text>`,
    `<text x="${MARGIN}" y="${MARGIN + plotH + 14}" font-size="9">` +
      `${xLo.toPrecision(3)}</text>`,
    `<text x="${MARGIN + plotW}" y="${MARGIN + plotH + 14}" font-size="9" ` +
      `text-anchor="end">${xHi.toPrecision(3)}</text>`,
    `<text x="${MARGIN - 4}" y="${MARGIN + plotH}" font-size="9" ` +
      `text-anchor="end">${yLo.toPrecision(3)}</text>`,
    `<text x="${MARGIN - 4}" y="${MARGIN + 9}" font-size="9" text-anchor="end">` +
      `${yHi.toPrecision(3)}</text>`,
  ];

  main.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const keep = series.x
      .map((x, j) => ({ x, y: series.y[j], err: series.yerr?.[j] }))
      .filter((p) => p.x > 0 && p.y > 0);
    if (!keep.length) return;
    const coords = keep.map((p) => ({
      cx: px(logFraction(p.x, xLo, xHi)),
      cy: py(logFraction(p.y, yLo, yHi)),
      p,
    }));
    if (series.kind === "curve") {
      const pts = coords.map((c) => `${c.cx.toFixed(1)},${c.cy.toFixed(1)}`).join(" ");
      parts.push(
        `<polyline fill="none" stroke="${color}" stroke-width="1.5" points="${pts}"/>`,
      );
    } else {
      for (const c of coords) {
        if (c.p.err !== undefined) {
          const top = py(logFraction(c.p.y + c.p.err, yLo, yHi));
          const bottomVal = Math.max(c.p.y - c.p.err, yLo * 1e-3);
          const bottom = py(logFraction(Math.max(bottomVal, 1e-300), yLo, yHi));
          parts.push(
            `<line x1="${c.cx.toFixed(1)}" y1="${bottom.toFixed(1)}" ` +
              `x2="${c.cx.toFixed(1)}" y2="${top.toFixed(1)}" ` +
              `stroke="${color}" stroke-width="0.6"/>`,
          );
        }
        parts.push(
          `<circle cx="${c.cx.toFixed(1)}" cy="${c.cy.toFixed(1)}" r="2" fill="${color}"/>`,
        );
      }
    }
    parts.push(
      `<text x="${MARGIN + 6}" y="${MARGIN + 14 + 13 * i}" font-size="10" ` +
        `fill="${color}">${escapeXml(series.label)}</text>`,
    );
  });

  if (strips.length) {
    parts.push(renderResidualStrip(strips[0], xLo, xHi, px));
  }
  parts.push("</svg>");
  return parts.join("\n");
}

function renderResidualStrip(
  strip: PlotSeries,
  xLo: number,
  xHi: number,
  px: (f: number) => number,
): string {
  const top = MAIN_HEIGHT + 6;
  const height = STRIP_HEIGHT - 34;
  const mid = top + height / 2;
  const plotW = WIDTH - 2 * MARGIN;
  const limit = Math.max(...strip.y.map((v) => Math.abs(v)), 1e-12);
  const parts = [
    `<rect x="${MARGIN}" y="${top}" width="${plotW}" height="${height}" ` +
      `fill="none" stroke="#333"/>`,
    `<line x1="${MARGIN}" y1="${mid}" x2="${MARGIN + plotW}" y2="${mid}" ` +
      `stroke="#999" stroke-dasharray="4 3"/>`,
    `<text x="${MARGIN}" y="${top + height + 14}" font-size="10">` +
      `${escapeXml(strip.label)} (linear, ±${limit.toPrecision(3)})</text>`,
  ];
  strip.x.forEach((x, i) => {
    if (x <= 0) return;
    const cx = px(logFraction(x, xLo, xHi));
    const cy = mid - (strip.y[i] / limit) * (height / 2 - 2);
    parts.push(
      `<circle cx="${cx.toFixed(1)}" cy="${cy.toFixed(1)}" r="1.5" fill="#d62728"/>`,
    );
  });
  return parts.join("\n");
}
