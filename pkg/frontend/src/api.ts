import type { EventResponse, InteractionEvent, ProfileDocument, ViewDocument } from './types.js'

/**
 * Thin client over the exploration endpoints. All personalization math
 * lives server-side; this sends raw events and renders what comes back.
 */
export class ApiClient {
  private readonly base: string
  private readonly fetchFn: typeof fetch

  constructor(base = '', fetchFn: typeof fetch = fetch) {
    this.base = base.replace(/\/$/, '')
    this.fetchFn = fetchFn
  }

  keyframeUrl(shotId: string): string {
    return `${this.base}/api/keyframes/${encodeURIComponent(shotId)}`
  }

  async overview(user: string): Promise<ViewDocument> {
    const url = `${this.base}/api/overview?user=${encodeURIComponent(user)}`
    return this.json<ViewDocument>(await this.fetchFn(url))
  }

  async sendEvent(event: InteractionEvent): Promise<ViewDocument> {
    const response = await this.fetchFn(`${this.base}/api/events`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(event),
    })
    const body = await this.json<EventResponse>(response)
    return body.view
  }

  async profile(user: string): Promise<ProfileDocument> {
    const url = `${this.base}/api/profile?user=${encodeURIComponent(user)}`
    return this.json<ProfileDocument>(await this.fetchFn(url))
  }

  private async json<T>(response: Response): Promise<T> {
    if (!response.ok) {
      let detail = response.statusText
      try {
        const body = (await response.json()) as { detail?: string }
        if (body.detail) detail = body.detail
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new Error(`api error ${response.status}: ${detail}`)
    }
    return (await response.json()) as T
  }
}
