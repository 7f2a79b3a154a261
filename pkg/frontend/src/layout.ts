import type { ViewDocument } from './types.js'

export interface Point {
  x: number
  y: number
}

export interface LayoutOptions {
  width: number
  height: number
  seed: number
  iterations?: number
}

/** Deterministic PRNG (mulberry32); same seed, same sequence, everywhere. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0
  return () => {
    a = (a + 0x6d2b79f5) | 0
    let t = Math.imul(a ^ (a >>> 15), 1 | a)
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296
  }
}

/**
 * Spring layout as a pure function of (view, options).
 *
 * Initial positions come from the seeded PRNG over nodes in shot_id order;
 * the simulation itself uses no randomness, so a fixed seed gives
 * pixel-identical positions on every reload. Each edge is a spring whose
 * rest length shrinks as its weight grows, all pairs feel a short-range
 * repulsion, and a mild centering force keeps components on screen.
 * Positions land inside [margin, size - margin].
 */
export function layoutView(view: ViewDocument, options: LayoutOptions): Map<string, Point> {
  const { width, height, seed } = options
  const iterations = options.iterations ?? 200
  const margin = 24

  const ids = view.nodes.map((n) => n.shot_id).sort()
  const index = new Map<string, number>(ids.map((id, i) => [id, i]))
  const n = ids.length
  const positions = new Map<string, Point>()
  if (n === 0) return positions

  const rand = mulberry32(seed)
  const xs = new Float64Array(n)
  const ys = new Float64Array(n)
  for (let i = 0; i < n; i++) {
    xs[i] = margin + rand() * (width - 2 * margin)
    ys[i] = margin + rand() * (height - 2 * margin)
  }

  const edges: Array<[number, number, number]> = []
  for (const e of view.edges) {
    const a = index.get(e.src)
    const b = index.get(e.dst)
    if (a !== undefined && b !== undefined) edges.push([a, b, e.weight])
  }

  // Target spacing shrinks with node count; rest length shrinks with weight
  // and stiffness grows with it, so a 0.9 edge draws visibly tighter than a
  // 0.4 edge even when crowding keeps every spring stretched.
  const spacing = Math.min(width, height) / (Math.sqrt(n) + 1)
  const rest = (weight: number) => spacing * (1.7 - weight)
  const stiffness = (weight: number) => 0.05 + 0.25 * weight
  const dx = new Float64Array(n)
  const dy = new Float64Array(n)
  const cx = width / 2
  const cy = height / 2

  for (let iter = 0; iter < iterations; iter++) {
    dx.fill(0)
    dy.fill(0)

    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let ddx = xs[i]! - xs[j]!
        let ddy = ys[i]! - ys[j]!
        let dist = Math.sqrt(ddx * ddx + ddy * ddy)
        if (dist < 0.01) {
          // Coincident nodes get a deterministic nudge along the index axis.
          ddx = 0.01 * (i - j)
          ddy = 0.01
          dist = Math.sqrt(ddx * ddx + ddy * ddy)
        }
        const repulse = (0.08 * spacing * spacing * spacing) / (dist * dist)
        dx[i]! += (ddx / dist) * repulse
        dy[i]! += (ddy / dist) * repulse
        dx[j]! -= (ddx / dist) * repulse
        dy[j]! -= (ddy / dist) * repulse
      }
    }

    for (const [a, b, weight] of edges) {
      const ddx = xs[a]! - xs[b]!
      const ddy = ys[a]! - ys[b]!
      const dist = Math.max(Math.sqrt(ddx * ddx + ddy * ddy), 0.01)
      const stretch = (dist - rest(weight)) * stiffness(weight)
      dx[a]! -= (ddx / dist) * stretch
      dy[a]! -= (ddy / dist) * stretch
      dx[b]! += (ddx / dist) * stretch
      dy[b]! += (ddy / dist) * stretch
    }

    const temperature = spacing * (0.25 - (0.24 * iter) / iterations)
    for (let i = 0; i < n; i++) {
      dx[i]! += (cx - xs[i]!) * 0.02
      dy[i]! += (cy - ys[i]!) * 0.02
      const len = Math.sqrt(dx[i]! * dx[i]! + dy[i]! * dy[i]!)
      if (len > 0) {
        const step = Math.min(len, temperature)
        xs[i]! += (dx[i]! / len) * step
        ys[i]! += (dy[i]! / len) * step
      }
      xs[i] = Math.min(width - margin, Math.max(margin, xs[i]!))
      ys[i] = Math.min(height - margin, Math.max(margin, ys[i]!))
    }
  }

  for (let i = 0; i < n; i++) {
    positions.set(ids[i]!, { x: xs[i]!, y: ys[i]! })
  }
  return positions
}
