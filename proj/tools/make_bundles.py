#!/usr/bin/env python3
"""Regenerates the bundled lexicon files under data/.

Word lists are authored here; counts per (language, row) are asserted
before anything is written. Output is the canonical JSON Lines layout
read by semgeo::load_dataset (manifest line first, keys in fixed order).
"""
import json
import pathlib
import sys
import unicodedata

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def w(s):
    return s.split()


# --------------------------------------------------------------------- ENU
ENU_CORE = {
    "core.family": w("mother father parent child son daughter brother sister grandmother grandfather "
                     "grandson granddaughter uncle aunt cousin nephew niece husband wife baby family "
                     "relative ancestor sibling twin"),
    "core.body": w("head face eye ear nose mouth tooth tongue lip neck shoulder arm elbow hand finger "
                   "thumb chest heart stomach back leg knee foot toe skin bone"),
    "core.action": w("run walk jump swim eat drink sleep speak listen read write sing dance think give "
                     "take build break open close push pull throw catch climb cook"),
    "core.emotion": w("happy sad angry afraid love hate joy fear anger sorrow hope pride shame guilt "
                      "envy surprise disgust calm anxious lonely excited bored grateful jealous nervous"),
    "core.nature": w("sun moon star sky cloud rain snow wind storm thunder river lake sea ocean "
                     "mountain hill forest tree flower grass stone sand earth fire water"),
    "core.animal": w("dog cat horse cow pig sheep goat chicken duck bird fish snake tiger lion bear "
                     "wolf fox rabbit mouse elephant monkey deer eagle whale frog"),
    "core.food": w("bread rice meat egg milk cheese butter apple banana orange grape lemon potato "
                   "tomato onion carrot soup salt sugar honey tea coffee cake noodle bean"),
    "core.time": w("day night morning evening noon midnight hour minute second week month year today "
                   "tomorrow yesterday spring summer autumn winter moment century decade past future season"),
    "core.space": w("up down left right front behind inside outside above below near far north south "
                    "east west center edge corner top bottom middle between around here"),
    "core.quality": w("big small long short tall hot cold warm cool new old young good bad fast slow "
                      "strong weak heavy beautiful ugly rich poor true false"),
    "core.function": w("the a an and or but if of in on at to from with by for not this that these "
                       "those he she it we they"),
}

ENU_NETWORK = {
    "network.work": w("work worker workers working worked works workplace workshop workload workforce "
                      "workday workweek workbench workbook workout workman workmanship workmate "
                      "workstation workflow workable workaholic workhouse workspace homework housework "
                      "teamwork framework network artwork overwork rework coworker paperwork groundwork "
                      "patchwork"),
    "network.light": w("light lights lighter lightest lighting lighted lightly lightness lighthouse "
                       "lightweight lightning lightbulb lightyear daylight sunlight moonlight starlight "
                       "spotlight flashlight highlight headlight candlelight torchlight twilight "
                       "enlighten enlightenment"),
}

ENU_NUMBER_WORDS = [
    ("zero", 0), ("one", 1), ("two", 2), ("three", 3), ("four", 4), ("five", 5), ("six", 6),
    ("seven", 7), ("eight", 8), ("nine", 9), ("ten", 10), ("eleven", 11), ("twelve", 12),
    ("thirteen", 13), ("fourteen", 14), ("fifteen", 15), ("sixteen", 16), ("seventeen", 17),
    ("eighteen", 18), ("nineteen", 19), ("twenty", 20), ("thirty", 30), ("forty", 40),
    ("fifty", 50), ("sixty", 60), ("seventy", 70), ("eighty", 80), ("ninety", 90),
    ("hundred", 100), ("thousand", 1000), ("million", 10**6), ("billion", 10**9),
    ("trillion", 10**12),
]

ENU_MATH = w("addition subtraction multiplication division computation calculation equation fraction "
             "decimal percentage integer sum difference product quotient remainder digit numeral "
             "arithmetic algebra geometry calculus statistics probability ratio average median "
             "exponent logarithm factorial prime multiple")

# (emoji, emoji category, english gloss, chinese gloss)
EMOJI = [
    ("🔥", "emoji.nature", "flame", "火焰"),
    ("💧", "emoji.nature", "droplet", "水滴"),
    ("🌊", "emoji.nature", "wave", "波浪"),
    ("🌙", "emoji.nature", "crescent", "弯月"),
    ("☀️", "emoji.nature", "sunshine", "阳光"),
    ("🌈", "emoji.nature", "rainbow", "彩虹"),
    ("⚡", "emoji.nature", "thunderbolt", "闪电"),
    ("❄️", "emoji.nature", "snowflake", "雪花"),
    ("🌳", "emoji.nature", "oak", "大树"),
    ("🌹", "emoji.nature", "rose", "玫瑰"),
    ("🌻", "emoji.nature", "sunflower", "向日葵"),
    ("🍁", "emoji.nature", "maple", "枫叶"),
    ("🌵", "emoji.nature", "cactus", "仙人掌"),
    ("⛰️", "emoji.nature", "peak", "高山"),
    ("🐶", "emoji.animal", "puppy", "小狗"),
    ("🐱", "emoji.animal", "kitten", "小猫"),
    ("🐴", "emoji.animal", "pony", "小马"),
    ("🐼", "emoji.animal", "panda", "熊猫"),
    ("🐢", "emoji.animal", "turtle", "乌龟"),
    ("🦋", "emoji.animal", "butterfly", "彩蝶"),
    ("🐝", "emoji.animal", "bee", "蜜蜂"),
    ("🐧", "emoji.animal", "penguin", "企鹅"),
    ("🐙", "emoji.animal", "octopus", "章鱼"),
    ("🦀", "emoji.animal", "crab", "螃蟹"),
    ("🐬", "emoji.animal", "dolphin", "海豚"),
    ("🦒", "emoji.animal", "giraffe", "长颈鹿"),
    ("🍕", "emoji.food", "pizza", "披萨"),
    ("🍔", "emoji.food", "burger", "汉堡"),
    ("🍦", "emoji.food", "ice cream", "冰淇淋"),
    ("🍓", "emoji.food", "strawberry", "草莓"),
    ("🍉", "emoji.food", "watermelon", "西瓜"),
    ("🍜", "emoji.food", "ramen", "拉面"),
    ("🍚", "emoji.food", "cooked rice", "白饭"),
    ("🍵", "emoji.food", "green tea", "绿茶"),
    ("🥟", "emoji.food", "dumpling", "水饺"),
    ("🍰", "emoji.food", "dessert", "甜点"),
    ("🏠", "emoji.object", "house", "住宅"),
    ("🚗", "emoji.object", "car", "汽车"),
    ("✈️", "emoji.object", "airplane", "飞机"),
    ("🚲", "emoji.object", "bicycle", "自行车"),
    ("📚", "emoji.object", "books", "书籍"),
    ("⏰", "emoji.object", "alarm clock", "闹钟"),
    ("🎵", "emoji.object", "music", "音乐"),
    ("💡", "emoji.object", "lightbulb idea", "灯泡"),
    ("🔑", "emoji.object", "key", "钥匙"),
    ("📱", "emoji.object", "phone", "手机"),
    ("😀", "emoji.face", "grin", "笑脸"),
    ("😢", "emoji.face", "tears", "眼泪"),
    ("😡", "emoji.face", "rage", "怒气"),
    ("❤️", "emoji.face", "affection", "爱心"),
]
ENU_EMOJI_SUBSET = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 14, 15, 16, 17, 18, 19, 20, 26, 27, 29, 30,
                    37, 38, 46, 47]

# --------------------------------------------------------------------- CHN
CHN_CORE = {
    "core.family": w("母亲 父亲 妈妈 爸爸 父母 女儿 哥哥 姐姐 弟弟 妹妹 爷爷 奶奶 外公 外婆 叔叔 阿姨 "
                     "舅舅 姑姑 丈夫 婴儿 家庭 亲戚 祖先 兄弟"),
    "core.body": w("头 脸 眼睛 耳朵 嘴 牙齿 舌头 嘴唇 颈 肩膀 手臂 手 手指 胸 心脏 胃 背 腿 膝盖 脚 "
                   "皮肤 骨头 头发 血"),
    "core.action": w("跑 走 跳 游泳 吃 喝 睡觉 说 听 读 写 唱 跳舞 想 给 拿 建 打破 开 关 推 拉 扔 爬"),
    "core.emotion": w("快乐 悲伤 生气 害怕 爱 恨 喜悦 恐惧 愤怒 希望 骄傲 羞耻 内疚 嫉妒 惊讶 厌恶 "
                      "平静 焦虑 孤独 兴奋 无聊 感激 紧张 幸福"),
    "core.nature": w("太阳 月亮 星星 天空 云 雨 雪 风 暴风 雷 河 湖 海 海洋 山 森林 树 花 草 石头 沙 "
                     "土地 火 水"),
    "core.animal": w("狗 猫 马 牛 猪 羊 鸡 鸭 鸟 鱼 蛇 老虎 熊 狼 狐狸 老鼠 大象 鹿 鹰 鲸鱼 青蛙 龙 "
                     "蚂蚁 蝴蝶"),
    "core.food": w("面包 米饭 肉 鸡蛋 牛奶 奶酪 黄油 苹果 香蕉 橙 葡萄 柠檬 土豆 西红柿 洋葱 胡萝卜 "
                   "汤 盐 糖 蜂蜜 茶 咖啡 蛋糕 面条"),
    "core.time": w("天 夜 早上 晚上 中午 午夜 小时 分钟 秒 星期 月 年 今天 明天 昨天 春天 夏天 秋天 "
                   "冬天 时刻 世纪 过去 未来 季节"),
    "core.space": w("上 下 左 右 前 后 里 外 上面 下面 附近 远 北 南 东 西 中心 边 角 顶部 底部 中间 "
                    "之间 周围"),
    "core.quality": w("大 小 长 短 高 热 冷 温暖 凉快 新 旧 年轻 好 坏 快 慢 强 弱 重 美丽 丑 富 穷 真"),
    "core.function": w("的 了 和 或 但是 如果 在 从 向 对 把 被 不 这 那 这些 那些 他 她 它 我们 他们 "
                       "我 你 吗"),
}

CHN_NETWORK = {
    "network.zi.kin": w("儿子 孙子 妻子 孩子 男子 女子 小子 君子 太子 王子 公子 天子 弟子 学子 才子 "
                        "游子 浪子 瞎子 傻子 胖子 瘦子 骗子 厨子 汉子 妃子 嫂子 侄子 主子"),
    "network.zi.philosopher": w("孔子 老子 孟子 庄子 荀子 墨子 韩非子 列子 鬼谷子 朱子 管子"),
    "network.zi.science": w("电子 原子 分子 质子 中子 粒子 因子 光子 量子 离子 配子 孢子 精子 卵子"),
    "network.zi.object": w("桌子 椅子 杯子 盘子 筷子 勺子 瓶子 箱子 柜子 盒子 袋子 本子 尺子 剪子 "
                           "锤子 钉子 绳子 棍子 刀子 镜子 扇子 被子 帽子 裤子 袜子 鞋子 裙子 袖子 领子 "
                           "扣子 房子 屋子 院子 车子 轮子 梯子 篮子 罐子"),
    "network.zi.body": w("鼻子 脖子 肚子 胡子 嗓子 脑子 个子 身子"),
    "network.zi.animal": w("兔子 猴子 狮子 燕子 鸽子 蚊子 虫子 豹子 骡子 驴子 蝎子"),
    "network.zi.plant": w("种子 果子 叶子 桃子 李子 栗子 柿子 橘子 椰子 茄子 饺子 包子 粽子"),
}

CHN_DIGITS = w("零 一 二 三 四 五 六 七 八 九")
CHN_POWERS = w("十 百 千 万 十万 百万 千万 亿")
CHN_OTHER = w("两 半")

# --------------------------------------------------------------------- DEU
DEU_CORE = {
    "core.family": w("Mutter Vater Eltern Kind Sohn Tochter Bruder Schwester Großmutter Großvater "
                     "Enkel Enkelin Onkel Tante Cousin Neffe Nichte Ehemann Ehefrau Baby Familie "
                     "Verwandte Vorfahr Zwilling"),
    "core.body": w("Kopf Gesicht Auge Ohr Nase Mund Zahn Zunge Lippe Hals Schulter Arm Ellbogen Hand "
                   "Finger Daumen Brust Herz Magen Rücken Bein Knie Fuß Haut"),
    "core.action": w("laufen gehen springen schwimmen essen trinken schlafen sprechen hören lesen "
                     "schreiben singen tanzen denken geben nehmen bauen brechen öffnen schließen "
                     "drücken ziehen werfen fangen"),
    "core.emotion": w("glücklich traurig wütend ängstlich Liebe Hass Freude Angst Zorn Kummer Hoffnung "
                      "Stolz Scham Schuld Neid Überraschung Ekel ruhig nervös einsam aufgeregt "
                      "gelangweilt dankbar eifersüchtig"),
    "core.nature": w("Sonne Mond Stern Himmel Wolke Regen Schnee Wind Sturm Donner Fluss See Meer Ozean "
                     "Berg Hügel Wald Baum Blume Gras Stein Sand Erde Feuer"),
    "core.animal": w("Hund Katze Pferd Kuh Schwein Schaf Ziege Huhn Ente Vogel Fisch Schlange Tiger Löwe "
                     "Bär Wolf Fuchs Hase Maus Elefant Affe Hirsch Adler Frosch"),
    "core.food": w("Brot Reis Fleisch Ei Milch Käse Butter Apfel Banane Orange Traube Zitrone Kartoffel "
                   "Tomate Zwiebel Karotte Suppe Salz Zucker Honig Tee Kaffee Kuchen Nudel"),
    "core.time": w("Tag Nacht Morgen Abend Mittag Mitternacht Stunde Minute Sekunde Woche Monat Jahr "
                   "heute gestern Frühling Sommer Herbst Winter Moment Jahrhundert Jahrzehnt "
                   "Vergangenheit Zukunft Jahreszeit"),
    "core.space": w("oben unten links rechts vorne hinten innen außen über unter nah fern Norden Süden "
                    "Osten Westen Mitte Rand Ecke Spitze Boden zwischen herum hier"),
    "core.quality": w("groß klein lang kurz hoch heiß kalt warm kühl neu alt jung gut schlecht schnell "
                      "langsam stark schwach schwer schön hässlich reich arm wahr"),
    "core.function": w("der die das und oder aber wenn von in auf an zu aus mit bei für nicht dies "
                       "jenes er sie es wir ihr ich"),
}

DEU_NETWORK = {
    "network.haus": w("Haus Häuser Haustür Hausfrau Hausmann Hausmeister Haushalt Haustier Hausschuh "
                      "Hausaufgabe Hausarzt Hausbesitzer Hausflur Hausnummer Hausdach Hauswand "
                      "Hausgarten Hausschlüssel Hausbau Hausordnung Krankenhaus Rathaus Gasthaus "
                      "Kaufhaus Hochhaus Bauernhaus Treibhaus Baumhaus Wohnhaus Parkhaus Landhaus "
                      "Ferienhaus Gewächshaus Opernhaus Schauspielhaus Zollhaus Elternhaus Pfarrhaus "
                      "Armenhaus Hinterhaus Vorderhaus Reihenhaus Einfamilienhaus Puppenhaus Warenhaus"),
    "network.arbeit": w("Arbeit Arbeiter Arbeiterin arbeiten Arbeitgeber Arbeitnehmer Arbeitsplatz "
                        "Arbeitszeit arbeitslos Arbeitslosigkeit Arbeitsamt Arbeitstag Arbeitswoche "
                        "Arbeitskraft Arbeitsvertrag Arbeitsmarkt Arbeitszimmer Arbeitsweg "
                        "Arbeitskleidung Arbeitsteilung Handarbeit Teamarbeit Schwarzarbeit "
                        "Zusammenarbeit Mitarbeiter Feldarbeit Gartenarbeit Hausarbeit Schularbeit "
                        "Facharbeiter Kurzarbeit Zeitarbeit Nachtarbeit Kinderarbeit Doktorarbeit "
                        "Abschlussarbeit Bauarbeiter Sozialarbeiter Mitarbeit Bearbeitung bearbeiten "
                        "Überarbeitung Vorarbeit Nacharbeit Fleißarbeit"),
}

DEU_NUMBER_WORDS = [
    ("null", 0), ("eins", 1), ("zwei", 2), ("drei", 3), ("vier", 4), ("fünf", 5), ("sechs", 6),
    ("sieben", 7), ("acht", 8), ("neun", 9), ("zehn", 10), ("elf", 11), ("zwölf", 12),
    ("dreizehn", 13), ("vierzehn", 14), ("fünfzehn", 15), ("sechzehn", 16), ("siebzehn", 17),
    ("achtzehn", 18), ("neunzehn", 19), ("zwanzig", 20), ("dreißig", 30), ("vierzig", 40),
    ("fünfzig", 50), ("sechzig", 60), ("siebzig", 70), ("achtzig", 80), ("neunzig", 90),
    ("hundert", 100), ("tausend", 1000), ("Million", 10**6), ("Milliarde", 10**9),
]
DEU_MATH = w("Addition Subtraktion Multiplikation Division Berechnung Gleichung Bruch Dezimalzahl "
             "Prozent Summe Differenz Produkt Quotient Rest")

# --------------------------------------------------------------- alphabets
HIRAGANA = list("あいうえおかきくけこさしすせそたちつてとなにぬねのはひふへほまみむめもやゆよらりるれろわをん")
KATAKANA = list("アイウエオカキクケコサシスセソタチツテトナニヌネノハヒフヘホマミムメモヤユヨラリルレロワヲン")
HANGUL = list("가나다라마바사아자차카타파하고노도로모보소오조호")
ARABIC = list("ابتثجحخدذرزسشصضطظعغفقكلمنهوي")
HAN = list("人山水火木日月口心手大小天地上下中马鱼鸟雨田土石门米王车女子")
LATIN = list("abcdefghijklmnopqrstuvwxyz")


def item(text, lang, category, level, order=None, pair_id=None):
    return {"text": unicodedata.normalize("NFC", text), "lang": lang, "category": category,
            "level": level, "order": order, "pair_id": pair_id}


def words(groups, lang, level="word"):
    return [item(t, lang, cat, level) for cat, ts in groups.items() for t in ts]


def numerals(lang, digits=True):
    out = []
    if digits:
        out += [item(str(d), lang, "numbers.digits", "number", d) for d in range(10)]
        out += [item(str(10**e), lang, "numbers.magnitude", "number", e) for e in range(1, 10)]
    return out


def build():
    files = {}
    files["enu_core"] = words(ENU_CORE, "enu")
    files["enu_network"] = words(ENU_NETWORK, "enu")
    files["enu_numbers"] = (
        numerals("enu")
        + [item(str(10 * k), "enu", "numbers.tens", "number", k) for k in range(2, 10)]
        + [item(t, "enu", "numbers.words", "number", v) for t, v in ENU_NUMBER_WORDS]
        + [item(t, "enu", "numbers.math", "word") for t in ENU_MATH])
    enu_emoji = []
    for i in ENU_EMOJI_SUBSET:
        e, cat, gloss, _ = EMOJI[i]
        pid = "enu-%02d" % i
        enu_emoji.append(item(e, "enu", cat, "emoji", pair_id=pid))
        enu_emoji.append(item(gloss, "enu", cat, "word", pair_id=pid))
    files["enu_emoji"] = enu_emoji

    files["chn_core"] = words(CHN_CORE, "chn")
    files["chn_network"] = words(CHN_NETWORK, "chn")
    files["chn_numbers"] = (
        [item(t, "chn", "numbers.digits", "number", i) for i, t in enumerate(CHN_DIGITS)]
        + [item(t, "chn", "numbers.powers10", "number", i + 1) for i, t in enumerate(CHN_POWERS)]
        + [item(t, "chn", "numbers.other", "number") for t in CHN_OTHER])
    chn_emoji = []
    for i, (e, cat, _, gloss) in enumerate(EMOJI):
        pid = "chn-%02d" % i
        chn_emoji.append(item(e, "chn", cat, "emoji", pair_id=pid))
        chn_emoji.append(item(gloss, "chn", cat, "word", pair_id=pid))
    files["chn_emoji"] = chn_emoji

    files["deu_core"] = words(DEU_CORE, "deu")
    files["deu_network"] = words(DEU_NETWORK, "deu")
    files["deu_numbers"] = (
        numerals("deu")
        + [item(t, "deu", "numbers.words", "number", v) for t, v in DEU_NUMBER_WORDS]
        + [item(t, "deu", "numbers.math", "word") for t in DEU_MATH])

    files["alphabets"] = (
        [item(c, "enu", "alphabet.latin_enu", "char") for c in LATIN]
        + [item(c, "deu", "alphabet.latin_deu", "char") for c in LATIN + list("äöüß")]
        + [item(c, "chn", "alphabet.han", "char") for c in HAN]
        + [item(c, "kor", "alphabet.hangul", "char") for c in HANGUL]
        + [item(c, "jpn", "alphabet.hiragana", "char") for c in HIRAGANA]
        + [item(c, "jpn", "alphabet.katakana", "char") for c in KATAKANA]
        + [item(c, "ara", "alphabet.arabic", "char") for c in ARABIC]
        + [item(str(d), "mixed", "alphabet.digit", "char", d) for d in range(10)])
    files["powers10"] = [item(str(10**e), "mixed", "numbers.powers10", "number", e)
                         for e in range(9)]
    return files


EXPECTED = {
    "enu_core": 278, "enu_network": 62, "enu_numbers": 92, "enu_emoji": 50,
    "chn_core": 265, "chn_network": 123, "chn_numbers": 20, "chn_emoji": 100,
    "deu_core": 265, "deu_network": 90, "deu_numbers": 65,
    "alphabets": 240, "powers10": 9,
}


def check(files):
    ok = True
    for name, items in files.items():
        if len(items) != EXPECTED[name]:
            print(f"{name}: {len(items)} items, expected {EXPECTED[name]}", file=sys.stderr)
            ok = False
    # uniqueness across every composite the catalog exposes
    composites = [[n for n in files if n.startswith(p)] for p in ("enu_", "chn_", "deu_")]
    composites.append([n for n in files if n[:4] in ("enu_", "chn_", "deu_")])
    composites += [["alphabets"], ["powers10"]]
    for comp in composites:
        seen = {}
        for n in comp:
            for it in files[n]:
                key = (it["text"], it["lang"], it["level"])
                if key in seen:
                    print(f"duplicate {key} in {n} and {seen[key]}", file=sys.stderr)
                    ok = False
                seen[key] = n
    return ok


def main():
    files = build()
    if not check(files):
        sys.exit(1)
    OUT.mkdir(exist_ok=True)
    for name, items in files.items():
        manifest = {}
        for it in items:
            row = it["category"].split(".")[0]
            manifest[row] = manifest.get(row, 0) + 1
        with open(OUT / f"{name}.jsonl", "w", encoding="utf-8", newline="\n") as f:
            f.write(json.dumps({"manifest": dict(sorted(manifest.items()))}, ensure_ascii=False, separators=(",", ":")) + "\n")
            for it in items:
                f.write(json.dumps(it, ensure_ascii=False, separators=(",", ":")) + "\n")
    print(f"wrote {len(files)} files to {OUT}")


if __name__ == "__main__":
    main()
