import type { Point } from './layout.js'
import type { ViewDocument } from './types.js'

export interface RenderOptions {
  keyframeUrl: (shotId: string) => string
  onNodeClick: (shotId: string) => void
  nodeSize?: number
}

const SVG_NS = 'http://www.w3.org/2000/svg'

/**
 * Paint one view into the container, replacing whatever was there.
 *
 * Pure in the rendering sense: the DOM produced is a function of the view
 * and the positions, nothing else. Every node raises exactly one click
 * callback per user click (listener on the node element only, no bubbling
 * duplicates).
 */
export function renderView(
  container: HTMLElement,
  view: ViewDocument,
  positions: Map<string, Point>,
  options: RenderOptions,
): void {
  const size = options.nodeSize ?? 36
  container.replaceChildren()
  container.dataset.kind = view.kind
  container.dataset.stimulus = view.stimulus ?? ''

  const svg = document.createElementNS(SVG_NS, 'svg')
  svg.setAttribute('class', 'graph-edges')
  svg.setAttribute('width', '100%')
  svg.setAttribute('height', '100%')

  for (const edge of view.edges) {
    const a = positions.get(edge.src)
    const b = positions.get(edge.dst)
    if (!a || !b) continue
    const line = document.createElementNS(SVG_NS, 'line')
    line.setAttribute('x1', String(a.x))
    line.setAttribute('y1', String(a.y))
    line.setAttribute('x2', String(b.x))
    line.setAttribute('y2', String(b.y))
    line.setAttribute('stroke-width', String(0.5 + 2 * edge.weight))
    line.setAttribute('class', `edge edge-${edge.kind}`)
    if (edge.kind === 'axon') line.setAttribute('stroke-dasharray', '4 3')
    svg.appendChild(line)
  }
  container.appendChild(svg)

  for (const node of view.nodes) {
    const pos = positions.get(node.shot_id)
    if (!pos) continue
    const el = document.createElement('div')
    el.className = node.is_medoid ? 'node node-medoid' : 'node'
    el.dataset.shotId = node.shot_id
    el.dataset.classId = String(node.class_id)
    el.style.position = 'absolute'
    el.style.left = `${pos.x - size / 2}px`
    el.style.top = `${pos.y - size / 2}px`
    el.style.width = `${size}px`
    el.style.height = `${size}px`
    el.style.opacity = String(0.4 + 0.6 * node.level)
    el.title = node.shot_id

    const img = document.createElement('img')
    img.src = options.keyframeUrl(node.shot_id)
    img.alt = node.shot_id
    img.draggable = false
    img.style.width = '100%'
    img.style.height = '100%'
    el.appendChild(img)

    el.addEventListener('click', () => options.onNodeClick(node.shot_id))
    container.appendChild(el)
  }
}
