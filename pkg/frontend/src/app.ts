import { ApiClient } from './api.js'
import { DwellTracker } from './dwell.js'
import { EventQueue } from './events.js'
import { layoutView } from './layout.js'
import { renderView } from './render.js'
import type { ViewDocument } from './types.js'

export interface AppOptions {
  user: string
  seed?: number
  apiBase?: string
  fetchFn?: typeof fetch
  now?: () => number
}

export interface App {
  view(): ViewDocument | null
  clickNode(shotId: string): Promise<void>
  dispose(): void
}

/**
 * Wire the explorer into a container element.
 *
 * Flow: fetch the user's overview, lay it out with the fixed seed, render.
 * A node click focuses the dwell tracker and posts one click event; the
 * returned view replaces the current one. Dwell reports post as events of
 * their own. All requests go through a single-flight queue, so a burst of
 * clicks degrades to an ordered sequence, never a race.
 */
export async function startApp(container: HTMLElement, options: AppOptions): Promise<App> {
  const api = new ApiClient(options.apiBase ?? '', options.fetchFn)
  const seed = options.seed ?? 1
  const queue = new EventQueue((event) => api.sendEvent(event))
  let current: ViewDocument | null = null

  const show = (view: ViewDocument) => {
    current = view
    const positions = layoutView(view, {
      width: container.clientWidth || 800,
      height: container.clientHeight || 600,
      seed,
    })
    renderView(container, view, positions, {
      keyframeUrl: (shotId) => api.keyframeUrl(shotId),
      onNodeClick: (shotId) => void clickNode(shotId),
    })
  }

  const clickNode = async (shotId: string): Promise<void> => {
    dwell.focus(shotId)
    const view = await queue.push({ user: options.user, shot_id: shotId, kind: 'click' })
    show(view)
  }

  const dwell = new DwellTracker((report) => {
    void queue
      .push({
        user: options.user,
        shot_id: report.shotId,
        kind: 'dwell',
        dwell_seconds: report.seconds,
      })
      .then(show)
  }, options.now)
  const unbind = dwell.bind(document, window)

  show(await api.overview(options.user))

  return {
    view: () => current,
    clickNode,
    dispose: () => {
      dwell.blur()
      unbind()
    },
  }
}
