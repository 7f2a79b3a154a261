/** Wire types for the exploration API. Field names mirror the JSON documents. */

export interface ViewNode {
  shot_id: string
  class_id: number
  is_medoid: boolean
  level: number
}

export interface ViewEdge {
  src: string
  dst: string
  weight: number
  kind: 'dendrite' | 'axon'
}

export interface ViewDocument {
  format: string
  format_version: string
  kind: 'overview' | 'focus'
  stimulus: string | null
  nodes: ViewNode[]
  edges: ViewEdge[]
}

export interface ClickEvent {
  user: string
  shot_id: string
  kind: 'click'
}

export interface DwellApiEvent {
  user: string
  shot_id: string
  kind: 'dwell'
  dwell_seconds: number
}

export type InteractionEvent = ClickEvent | DwellApiEvent

export interface EventResponse {
  ok: boolean
  view: ViewDocument
}

export interface ShotStats {
  clicks: number
  dwell_seconds: number
  last_seen: number | null
}

export interface ProfileDocument {
  user_id: string
  stats: Record<string, ShotStats>
  static_info: Record<string, string>
}
