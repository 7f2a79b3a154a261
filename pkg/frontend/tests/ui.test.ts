import { beforeEach, describe, expect, it, vi } from 'vitest'

import { startApp } from '../src/app.js'
import { layoutView } from '../src/layout.js'
import { renderView } from '../src/render.js'
import type { InteractionEvent, ViewDocument } from '../src/types.js'

const OVERVIEW: ViewDocument = {
  format: 'shotgraph/view',
  format_version: '1',
  kind: 'overview',
  stimulus: null,
  nodes: [
    { shot_id: 's1', class_id: 0, is_medoid: true, level: 0 },
    { shot_id: 's2', class_id: 0, is_medoid: false, level: 0 },
    { shot_id: 's3', class_id: 1, is_medoid: true, level: 0 },
  ],
  edges: [{ src: 's1', dst: 's2', weight: 0.8, kind: 'dendrite' }],
}

const FOCUS: ViewDocument = {
  format: 'shotgraph/view',
  format_version: '1',
  kind: 'focus',
  stimulus: 's2',
  nodes: [
    { shot_id: 's1', class_id: 0, is_medoid: true, level: 0.68 },
    { shot_id: 's2', class_id: 0, is_medoid: false, level: 1 },
    { shot_id: 's3', class_id: 1, is_medoid: true, level: 0 },
  ],
  edges: [{ src: 's1', dst: 's2', weight: 0.8, kind: 'dendrite' }],
}

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { 'content-type': 'application/json' },
  })
}

function makeBackend() {
  const events: InteractionEvent[] = []
  const fetchFn = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input)
    if (url.includes('/api/overview')) return jsonResponse(OVERVIEW)
    if (url.includes('/api/events')) {
      const event = JSON.parse(String(init?.body)) as InteractionEvent
      events.push(event)
      return jsonResponse({ ok: true, view: event.kind === 'click' ? FOCUS : OVERVIEW })
    }
    throw new Error(`unexpected request: ${url}`)
  }) as unknown as typeof fetch
  return { events, fetchFn }
}

const flush = async () => {
  for (let i = 0; i < 4; i++) await new Promise<void>((r) => setTimeout(r, 0))
}

function shownIds(container: HTMLElement): string[] {
  return [...container.querySelectorAll<HTMLElement>('.node')].map((el) => el.dataset.shotId!)
}

let container: HTMLElement

beforeEach(() => {
  document.body.replaceChildren()
  container = document.createElement('div')
  document.body.appendChild(container)
})

describe('explorer loop', () => {
  it('clicking a rendered node issues exactly one event and re-renders the response', async () => {
    const { events, fetchFn } = makeBackend()
    await startApp(container, { user: 'u1', seed: 7, fetchFn })
    expect(container.dataset.kind).toBe('overview')
    expect(shownIds(container)).toEqual(['s1', 's2', 's3'])

    container.querySelector<HTMLElement>('[data-shot-id="s2"]')!.click()
    await flush()

    expect(events).toHaveLength(1)
    expect(events[0]).toMatchObject({ user: 'u1', shot_id: 's2', kind: 'click' })
    expect(container.dataset.kind).toBe('focus')
    expect(container.dataset.stimulus).toBe('s2')
    const s2 = container.querySelector<HTMLElement>('[data-shot-id="s2"]')!
    expect(s2.style.opacity).toBe('1')
  })

  it('a 30 second focus emits one dwell event of 30 seconds, give or take one', async () => {
    const { events, fetchFn } = makeBackend()
    let t = 1000
    const app = await startApp(container, { user: 'u1', seed: 7, fetchFn, now: () => t })

    container.querySelector<HTMLElement>('[data-shot-id="s2"]')!.click()
    await flush()
    t += 30
    app.dispose()
    await flush()

    const dwells = events.filter((e) => e.kind === 'dwell')
    expect(dwells).toHaveLength(1)
    expect(dwells[0]!.shot_id).toBe('s2')
    expect(Math.abs((dwells[0] as { dwell_seconds: number }).dwell_seconds - 30)).toBeLessThanOrEqual(1)
  })

  it('rapid clicks stay ordered with one request in flight', async () => {
    const { events, fetchFn } = makeBackend()
    await startApp(container, { user: 'u1', seed: 7, fetchFn })
    container.querySelector<HTMLElement>('[data-shot-id="s2"]')!.click()
    container.querySelector<HTMLElement>('[data-shot-id="s1"]')!.click()
    await flush()

    const clicks = events.filter((e) => e.kind === 'click')
    expect(clicks.map((e) => e.shot_id)).toEqual(['s2', 's1'])
    // The s2 -> s1 focus change lasted well under a second, so no dwell.
    expect(events.filter((e) => e.kind === 'dwell')).toHaveLength(0)
  })
})

describe('rendering', () => {
  it('is pixel-stable for a fixed seed across reloads', () => {
    const options = { width: 800, height: 600, seed: 11 }
    const read = () => {
      renderView(container, OVERVIEW, layoutView(OVERVIEW, options), {
        keyframeUrl: (id) => `/api/keyframes/${id}`,
        onNodeClick: () => undefined,
      })
      return shownIds(container).map((id) => {
        const el = container.querySelector<HTMLElement>(`[data-shot-id="${id}"]`)!
        return [id, el.style.left, el.style.top]
      })
    }
    expect(read()).toEqual(read())
  })

  it('renders medoids, edges, and keyframe images', () => {
    const options = { width: 800, height: 600, seed: 11 }
    renderView(container, OVERVIEW, layoutView(OVERVIEW, options), {
      keyframeUrl: (id) => `/kf/${id}.png`,
      onNodeClick: () => undefined,
    })
    expect(container.querySelectorAll('.node-medoid')).toHaveLength(2)
    expect(container.querySelectorAll('line.edge')).toHaveLength(1)
    const img = container.querySelector<HTMLImageElement>('[data-shot-id="s1"] img')!
    expect(img.src).toContain('/kf/s1.png')
  })

  it('raises one callback per click', () => {
    const options = { width: 800, height: 600, seed: 11 }
    const clicked: string[] = []
    renderView(container, OVERVIEW, layoutView(OVERVIEW, options), {
      keyframeUrl: (id) => `/kf/${id}.png`,
      onNodeClick: (id) => clicked.push(id),
    })
    container.querySelector<HTMLElement>('[data-shot-id="s3"]')!.click()
    expect(clicked).toEqual(['s3'])
  })
})
