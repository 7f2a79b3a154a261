export interface DwellReport {
  shotId: string
  seconds: number
}

export type EmitFn = (report: DwellReport) => void
export type ClockFn = () => number

const MIN_REPORTABLE_SECONDS = 1.0

/**
 * Measures how long the user keeps one shot focused.
 *
 * Accumulation runs from focus to blur (or to the next focus) and pauses
 * while the page is hidden. Durations under one second are dropped, so a
 * quick pass over a thumbnail never counts as consultation.
 */
export class DwellTracker {
  private readonly emit: EmitFn
  private readonly now: ClockFn
  private current: string | null = null
  private accumulated = 0
  private runningSince: number | null = null

  constructor(emit: EmitFn, now: ClockFn = () => Date.now() / 1000) {
    this.emit = emit
    this.now = now
  }

  get focusedShot(): string | null {
    return this.current
  }

  /** Start timing shotId; an already-focused shot is reported first. */
  focus(shotId: string): void {
    if (this.current === shotId) return
    this.blur()
    this.current = shotId
    this.accumulated = 0
    this.runningSince = this.now()
  }

  /** Stop timing and report the accumulated duration if it is long enough. */
  blur(): void {
    if (this.current === null) return
    this.pause()
    const seconds = this.accumulated
    const shotId = this.current
    this.current = null
    this.accumulated = 0
    if (seconds >= MIN_REPORTABLE_SECONDS) {
      this.emit({ shotId, seconds })
    }
  }

  /** Freeze the clock without ending the focus (tab hidden). */
  pause(): void {
    if (this.runningSince !== null) {
      this.accumulated += this.now() - this.runningSince
      this.runningSince = null
    }
  }

  /** Resume a paused focus (tab visible again). */
  resume(): void {
    if (this.current !== null && this.runningSince === null) {
      this.runningSince = this.now()
    }
  }

  /** Wire pause/resume to the document's visibility and window blur. */
  bind(doc: Document, win: Window): () => void {
    const onVisibility = () => {
      if (doc.visibilityState === 'hidden') this.pause()
      else this.resume()
    }
    const onBlur = () => this.blur()
    doc.addEventListener('visibilitychange', onVisibility)
    win.addEventListener('blur', onBlur)
    return () => {
      doc.removeEventListener('visibilitychange', onVisibility)
      win.removeEventListener('blur', onBlur)
    }
  }
}
