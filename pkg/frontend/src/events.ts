import type { InteractionEvent, ViewDocument } from './types.js'

export type SendFn = (event: InteractionEvent) => Promise<ViewDocument>

interface Pending {
  event: InteractionEvent
  resolve: (view: ViewDocument) => void
  reject: (err: unknown) => void
}

/**
 * Serializes user actions into single-flight requests.
 *
 * At most one request is on the wire at a time; actions issued while one
 * is in flight are queued and sent in order. Each pushed event results in
 * exactly one request, whether it succeeds or fails.
 */
export class EventQueue {
  private readonly send: SendFn
  private readonly queue: Pending[] = []
  private inFlight = false

  constructor(send: SendFn) {
    this.send = send
  }

  /** Number of events waiting behind the in-flight one. */
  get pending(): number {
    return this.queue.length
  }

  get busy(): boolean {
    return this.inFlight
  }

  push(event: InteractionEvent): Promise<ViewDocument> {
    return new Promise<ViewDocument>((resolve, reject) => {
      this.queue.push({ event, resolve, reject })
      void this.pump()
    })
  }

  private async pump(): Promise<void> {
    if (this.inFlight) return
    this.inFlight = true
    try {
      while (this.queue.length > 0) {
        const next = this.queue.shift() as Pending
        try {
          next.resolve(await this.send(next.event))
        } catch (err) {
          next.reject(err)
        }
      }
    } finally {
      this.inFlight = false
    }
  }
}
